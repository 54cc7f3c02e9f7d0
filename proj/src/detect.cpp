#include "flatdetect/detect.hpp"

#include "flatdetect/charforms.hpp"
#include "flatdetect/error.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace flatdetect {

// ---------------------------------------------------------------------------------------------
// Descriptors

GroupClassDescriptor GroupClassDescriptor::free(int rank) {
  if (rank < 0) throw InvalidInput("free rank must be nonnegative");
  GroupClassDescriptor d;
  d.kind_ = Kind::Free;
  d.rank_ = rank;
  d.presentation_ = free_group(rank);
  return d;
}

GroupClassDescriptor GroupClassDescriptor::free_abelian(int rank) {
  if (rank < 0) throw InvalidInput("free abelian rank must be nonnegative");
  if (rank > kMaxLabels) throw InvalidInput("free abelian rank above 32 is not supported");
  GroupClassDescriptor d;
  d.kind_ = Kind::FreeAbelian;
  d.rank_ = rank;
  d.presentation_ = free_abelian_group(rank);
  return d;
}

GroupClassDescriptor GroupClassDescriptor::surface(int genus) {
  if (genus < 1) throw InvalidInput("surface genus must be at least 1");
  GroupClassDescriptor d;
  d.kind_ = Kind::SurfaceClosed;
  d.rank_ = genus;
  d.presentation_ = surface_group(genus);
  return d;
}

GroupClassDescriptor GroupClassDescriptor::free_product(const GroupClassDescriptor& left,
                                                        const GroupClassDescriptor& right) {
  GroupClassDescriptor d;
  d.kind_ = Kind::FreeProduct;
  d.children_ = {left, right};
  d.presentation_ = flatdetect::free_product(left.presentation(), right.presentation());
  return d;
}

GroupClassDescriptor GroupClassDescriptor::direct_product(const GroupClassDescriptor& left,
                                                          const GroupClassDescriptor& right) {
  GroupClassDescriptor d;
  d.kind_ = Kind::DirectProduct;
  d.children_ = {left, right};
  d.presentation_ = flatdetect::direct_product(left.presentation(), right.presentation());
  return d;
}

GroupClassDescriptor GroupClassDescriptor::finite_index_super(const GroupClassDescriptor& sub, int index,
                                                              std::string label, GroupPresentation group,
                                                              std::optional<HomologyTable> table) {
  if (index < 2) throw InvalidInput("finite-index supergroup needs index at least 2");
  GroupClassDescriptor d;
  d.kind_ = Kind::FiniteIndexSuper;
  d.rank_ = index;
  d.label_ = std::move(label);
  d.children_ = {sub};
  d.presentation_ = std::move(group);
  d.table_ = std::move(table);
  return d;
}

std::string GroupClassDescriptor::describe() const {
  switch (kind_) {
    case Kind::Free:
      return "free(" + std::to_string(rank_) + ")";
    case Kind::FreeAbelian:
      return "zn(" + std::to_string(rank_) + ")";
    case Kind::SurfaceClosed:
      return "surface(" + std::to_string(rank_) + ")";
    case Kind::FreeProduct:
      return "freeprod(" + children_[0].describe() + ", " + children_[1].describe() + ")";
    case Kind::DirectProduct:
      return "prod(" + children_[0].describe() + ", " + children_[1].describe() + ")";
    case Kind::FiniteIndexSuper:
      break;
  }
  return "super(" + children_[0].describe() + ", " + std::to_string(rank_) + ", " + label_ + ")";
}

// ---------------------------------------------------------------------------------------------
// Homology

std::vector<int> HomologyBasis::betti() const {
  std::vector<int> out;
  for (const auto& c : classes) {
    if (static_cast<int>(out.size()) <= c.degree) out.resize(c.degree + 1, 0);
    ++out[c.degree];
  }
  return out;
}

namespace {

HomologyClass point_class() { return HomologyClass{0, "[pt]", {{0u, Rational(1)}}, std::nullopt, true}; }

HomologyClass generator_class(const GroupPresentation& g, std::size_t i) {
  return HomologyClass{1, "[" + g.generators()[i] + "]", {{1u << i, Rational(1)}}, Word::generator(i), true};
}

HomologyClass shifted(const HomologyClass& c, std::size_t offset) {
  HomologyClass out = c;
  for (auto& [mono, value] : out.functional) mono <<= offset;
  if (out.representative)
    for (Letter& l : out.representative->letters) l.generator += offset;
  return out;
}

void sort_by_degree(std::vector<HomologyClass>& classes) {
  std::stable_sort(classes.begin(), classes.end(),
                   [](const HomologyClass& a, const HomologyClass& b) { return a.degree < b.degree; });
}

HomologyBasis super_homology(const GroupClassDescriptor& d) {
  if (!d.table()) throw InvalidInput("finite-index supergroup '" + d.label() + "' needs a supplied homology table");
  const HomologyTable& t = *d.table();
  const GroupPresentation& g = d.presentation();
  if (t.betti.empty() || t.betti[0] != 1) throw InvalidInput("homology table must have b0 = 1");
  const int b1 = t.betti.size() > 1 ? t.betti[1] : 0;
  if (static_cast<int>(t.h1_words.size()) != b1)
    throw InvalidInput("homology table lists " + std::to_string(t.h1_words.size()) + " H1 representatives for b1 = " +
                       std::to_string(b1));
  HomologyBasis out;
  out.classes.push_back(point_class());
  for (const std::string& text : t.h1_words) {
    const Word w = parse_word(text, g);
    std::vector<long> exponents(g.generator_count(), 0);
    for (const Letter& l : w.letters) exponents[l.generator] += l.inverse ? -1 : 1;
    HomologyClass c{1, "[" + g.format_word(w) + "]", {}, w, true};
    for (std::size_t i = 0; i < exponents.size(); ++i)
      if (exponents[i] != 0) c.functional.emplace_back(1u << i, Rational(exponents[i]));
    out.classes.push_back(std::move(c));
  }
  for (std::size_t q = 2; q < t.betti.size(); ++q)
    for (int k = 0; k < t.betti[q]; ++k)
      out.classes.push_back(HomologyClass{static_cast<int>(q), "[h" + std::to_string(q) + "." + std::to_string(k + 1) + "]",
                                          {}, std::nullopt, false});
  return out;
}

}  // namespace

HomologyBasis rational_homology(const GroupClassDescriptor& d) {
  const GroupPresentation& g = d.presentation();
  HomologyBasis out;
  switch (d.kind()) {
    case GroupClassDescriptor::Kind::Free:
      out.classes.push_back(point_class());
      for (std::size_t i = 0; i < g.generator_count(); ++i) out.classes.push_back(generator_class(g, i));
      return out;
    case GroupClassDescriptor::Kind::FreeAbelian: {
      const int n = d.rank();
      std::vector<std::uint32_t> subsets;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) subsets.push_back(static_cast<std::uint32_t>(m));
      std::sort(subsets.begin(), subsets.end(), [](std::uint32_t a, std::uint32_t b) {
        return MonomialOrder{}(make_monomial(a, 0), make_monomial(b, 0));
      });
      for (std::uint32_t s : subsets) {
        if (s == 0) {
          out.classes.push_back(point_class());
          continue;
        }
        std::string label;
        for (int i = 0; i < n; ++i)
          if ((s >> i) & 1u) label += (label.empty() ? "" : "^") + g.generators()[i];
        HomologyClass c{std::popcount(s), "[" + label + "]", {{s, Rational(1)}}, std::nullopt, true};
        if (c.degree == 1) c.representative = Word::generator(static_cast<std::size_t>(std::countr_zero(s)));
        out.classes.push_back(std::move(c));
      }
      return out;
    }
    case GroupClassDescriptor::Kind::SurfaceClosed: {
      out.classes.push_back(point_class());
      for (std::size_t i = 0; i < g.generator_count(); ++i) out.classes.push_back(generator_class(g, i));
      HomologyClass top{2, "[S_" + std::to_string(d.rank()) + "]", {}, std::nullopt, true};
      for (int i = 0; i < d.rank(); ++i) top.functional.emplace_back((1u << (2 * i)) | (1u << (2 * i + 1)), Rational(1));
      out.classes.push_back(std::move(top));
      return out;
    }
    case GroupClassDescriptor::Kind::FreeProduct: {
      const HomologyBasis left = rational_homology(d.children()[0]);
      const HomologyBasis right = rational_homology(d.children()[1]);
      const std::size_t offset = d.children()[0].presentation().generator_count();
      out.classes.push_back(point_class());
      for (const auto& c : left.classes)
        if (c.degree > 0) out.classes.push_back(c);
      for (const auto& c : right.classes)
        if (c.degree > 0) out.classes.push_back(shifted(c, offset));
      sort_by_degree(out.classes);
      return out;
    }
    case GroupClassDescriptor::Kind::DirectProduct: {
      const HomologyBasis left = rational_homology(d.children()[0]);
      const HomologyBasis right = rational_homology(d.children()[1]);
      const std::size_t offset = d.children()[0].presentation().generator_count();
      for (const auto& a : left.classes)
        for (const auto& b0 : right.classes) {
          const HomologyClass b = shifted(b0, offset);
          HomologyClass c{a.degree + b.degree, a.label + "x" + b.label, {}, std::nullopt,
                          a.functional_known && b.functional_known};
          for (const auto& [ma, va] : a.functional)
            for (const auto& [mb, vb] : b.functional) c.functional.emplace_back(ma | mb, va * vb);
          if (a.degree == 1 && b.degree == 0) c.representative = a.representative;
          if (a.degree == 0 && b.degree == 1) c.representative = b.representative;
          out.classes.push_back(std::move(c));
        }
      sort_by_degree(out.classes);
      return out;
    }
    case GroupClassDescriptor::Kind::FiniteIndexSuper:
      break;
  }
  return super_homology(d);
}

MultiForm slant_contract(const MultiForm& ch, const HomologyClass& cls) {
  if (!cls.functional_known)
    throw InvalidInput("class " + cls.label + " has no known pairing with base monomials");
  std::map<std::uint32_t, Rational> dual;
  for (const auto& [mono, value] : cls.functional) {
    if (ch.space().base < 32 && (mono >> ch.space().base) != 0)
      throw InvalidInput("class " + cls.label + " uses base labels outside the form's label space");
    dual[mono] += value;
  }
  MultiForm out(LabelSpace{0, ch.space().param});
  for (const auto& [mono, c] : ch.terms()) {
    const auto it = dual.find(base_part(mono));
    if (it != dual.end() && it->second != 0) out.add_term(make_monomial(0, param_part(mono)), c * it->second);
  }
  return out;
}

namespace {

Rational minor(const RationalMatrix& m, std::uint32_t rows, std::uint32_t cols) {
  if (rows == 0) return 1;
  std::vector<std::size_t> r, c;
  for (std::size_t i = 0; i < 32; ++i) {
    if ((rows >> i) & 1u) r.push_back(i);
    if ((cols >> i) & 1u) c.push_back(i);
  }
  return m.select(r, c).determinant();
}

}  // namespace

HomologyClass pushforward_class(const HomologyClass& cls, const SubgroupCover& cover) {
  if (!cover.free_abelian_model()) throw InvalidInput("unsupported cover description: not a torus cover of Z^n");
  if (!cls.functional_known) throw InvalidInput("class " + cls.label + " has no known pairing with base monomials");
  const RationalMatrix& m = cover.lattice();
  const int n = static_cast<int>(m.rows());
  HomologyClass out{cls.degree, "pi_*" + cls.label, {}, std::nullopt, true};
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) != cls.degree) continue;
    Rational value = 0;
    for (const auto& [t, v] : cls.functional) value += minor(m, s, t) * v;
    if (value != 0) out.functional.emplace_back(s, value);
  }
  if (cls.representative) {
    Word w;
    for (const Letter& l : cls.representative->letters) {
      const Word& image = cover.subgroup_generators().at(l.generator);
      w = w * (l.inverse ? image.inverse() : image);
    }
    out.representative = free_reduce(w);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Detection

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::FdCertified:
      return "FD-certified";
    case Verdict::Undetected:
      return "undetected";
    case Verdict::Obstructed:
      break;
  }
  return "obstructed";
}

namespace {

const char* const kScope =
    "Flat detectability is certified only over the structured parameter spaces supported here "
    "(tori, finite point sets, and their products and disjoint unions), not over all finite CW complexes.";

std::vector<std::string> sign_dictionary() {
  return {
      "Monomials list base labels z1 < z2 < ... before parameter labels x1 < x2 < ...; a term c z_S x_P "
      "contracted against the class dual to z_S gives c x_P.",
      "The character family of Z^n has Chern character prod_j (1 + z_j x_j); rewriting it base-first gives the "
      "coefficient (-1)^(k(k-1)/2) on z_S x_S with |S| = k.",
      "The coefficient of z_i x_j equals the winding number of det rho_x(g_i) along x_j (t -> exp(2 pi i t) "
      "winds +1), and equals c1 = (i/2pi) int tr F over the 2-torus oriented (z_i, x_j); the orientation "
      "(x_j, z_i) gives the negative.",
      "Direct products use left-major Kunneth ordering; a cross class a x b pairs with z_S z_T as the product "
      "of the factor pairings.",
  };
}

std::vector<std::uint32_t> param_monomials(int dim) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << dim); ++m) out.push_back(static_cast<std::uint32_t>(m));
  std::sort(out.begin(), out.end(), [](std::uint32_t a, std::uint32_t b) {
    return MonomialOrder{}(make_monomial(0, a), make_monomial(0, b));
  });
  return out;
}

void check_family_group(const GroupClassDescriptor& d, const Family& f) {
  if (f.group().generators() != d.presentation().generators())
    throw InvalidInput("family '" + f.structure() + "' is built for a different group than " + d.describe());
}

DetectionReport skeleton(const GroupClassDescriptor& d, const std::vector<Family>& fams, const HomologyBasis& basis) {
  if (fams.empty()) throw InvalidInput("detection needs at least one family");
  DetectionReport r;
  r.group = d.describe();
  for (const auto& c : basis.classes) {
    r.row_labels.push_back(c.label);
    r.row_degrees.push_back(c.degree);
  }
  for (std::size_t i = 0; i < fams.size(); ++i) {
    check_family_group(d, fams[i]);
    r.families.push_back(fams[i].structure());
    const auto& comps = fams[i].components();
    for (std::size_t c = 0; c < comps.size(); ++c)
      for (std::uint32_t p : param_monomials(comps[c].dim()))
        r.columns.push_back(DetectionColumn{i, c, p,
                                            "f" + std::to_string(i + 1) + ".c" + std::to_string(c + 1) + ":" +
                                                monomial_label(make_monomial(0, p))});
  }
  r.scope = kScope;
  r.sign_conventions = sign_dictionary();
  return r;
}

void finish(DetectionReport& r) {
  bool unknown = false;
  r.detected.clear();
  r.undetected.clear();
  for (std::size_t i = 0; i < r.matrix.size(); ++i) {
    bool hit = false;
    bool missing = false;
    for (const auto& e : r.matrix[i]) {
      if (!e) missing = true;
      else if (*e != 0) hit = true;
    }
    r.detected.push_back(hit);
    if (!hit) {
      r.undetected.push_back(r.row_labels[i]);
      unknown = unknown || missing;
    }
  }
  if (r.undetected.empty()) r.verdict = Verdict::FdCertified;
  else r.verdict = unknown ? Verdict::Obstructed : Verdict::Undetected;
}

// Winding of det rho(w) along axis j of component c, other coordinates at 0.
int axis_winding(const Family& f, std::size_t component, int axis, const Word& w) {
  const int dim = f.components()[component].dim();
  for (int samples = 64; samples <= 1 << 14; samples *= 2) {
    std::vector<Matrix> loop;
    loop.reserve(samples + 1);
    for (int s = 0; s <= samples; ++s) {
      ParamPoint p{component, std::vector<double>(dim, 0.0)};
      p.coords[axis] = static_cast<double>(s) / samples;
      loop.push_back(evaluate_word(w, f.evaluate(p)));
    }
    try {
      return winding_number(loop);
    } catch (const InvalidInput& e) {
      if (std::string(e.what()).find("under-sampled") == std::string::npos) throw;
    }
  }
  throw InvalidInput("determinant loop of '" + f.structure() + "' stays under-sampled at 16384 samples");
}

}  // namespace

DetectionReport detection_matrix(const GroupClassDescriptor& d, const std::vector<Family>& fams) {
  const HomologyBasis basis = rational_homology(d);
  for (const Family& f : fams)
    if (!f.has_chern())
      throw InvalidInput("family '" + f.structure() +
                         "' carries no exact Chern data; use the numeric pairing path (detect run --numeric)");
  DetectionReport r = skeleton(d, fams, basis);
  for (const HomologyClass& cls : basis.classes) {
    std::vector<std::optional<Rational>> row;
    std::vector<std::vector<MultiForm>> contracted(fams.size());
    for (std::size_t i = 0; i < fams.size(); ++i)
      for (const MultiForm& ch : fams[i].chern()) contracted[i].push_back(slant_contract(ch, cls));
    for (const DetectionColumn& col : r.columns)
      row.emplace_back(contracted[col.family][col.component].coefficient(make_monomial(0, col.x_monomial)));
    r.matrix.push_back(std::move(row));
  }
  finish(r);
  return r;
}

DetectionReport numeric_detection_matrix(const GroupClassDescriptor& d, const std::vector<Family>& fams) {
  const HomologyBasis basis = rational_homology(d);
  DetectionReport r = skeleton(d, fams, basis);
  r.numeric = true;
  for (const HomologyClass& cls : basis.classes) {
    std::vector<std::optional<Rational>> row;
    for (const DetectionColumn& col : r.columns) {
      const int q = cls.degree;
      const int p = std::popcount(col.x_monomial);
      const Family& f = fams[col.family];
      if (q == 0 && p == 0) row.emplace_back(Rational(f.fiber_dims()[col.component]));
      else if ((q + p) % 2 == 1 || q == 0 || p == 0) row.emplace_back(Rational(0));
      else if (q == 1 && p == 1 && cls.representative)
        row.emplace_back(Rational(axis_winding(f, col.component, std::countr_zero(col.x_monomial), *cls.representative)));
      else row.emplace_back(std::nullopt);
    }
    r.matrix.push_back(std::move(row));
  }
  finish(r);
  return r;
}

TransferCheck transfer_scaling_check(const Family& f, const SubgroupCover& cover) {
  if (!cover.free_abelian_model()) throw InvalidInput("unsupported cover description: not a torus cover of Z^n");
  if (!f.has_chern()) throw InvalidInput("transfer scaling needs a family with exact Chern data");
  const auto d = GroupClassDescriptor::free_abelian(static_cast<int>(cover.group().generator_count()));
  const Family induced = induce_family(restrict_family(f, cover), cover);
  const Family numeric_only(induced.group(), induced.space(), induced.fiber_dims(),
                            [induced](const ParamPoint& p) { return induced.evaluate(p); }, induced.structure());

  const DetectionReport before = detection_matrix(d, {f});
  const DetectionReport after = detection_matrix(d, {induced});
  const DetectionReport numeric = numeric_detection_matrix(d, {numeric_only});

  TransferCheck out;
  out.index = cover.index();
  const Rational scale(static_cast<long>(cover.index()));
  out.passed = true;
  for (std::size_t i = 0; i < before.matrix.size(); ++i)
    for (std::size_t j = 0; j < before.matrix[i].size(); ++j) {
      const Rational expected = scale * *before.matrix[i][j];
      ++out.exact_entries;
      if (*after.matrix[i][j] != expected) {
        out.passed = false;
        out.detail = "exact entry (" + before.row_labels[i] + ", " + before.columns[j].label + "): " +
                     to_string(*after.matrix[i][j]) + " != " + to_string(expected);
        return out;
      }
      if (numeric.matrix[i][j]) {
        ++out.numeric_entries;
        if (*numeric.matrix[i][j] != expected) {
          out.passed = false;
          out.detail = "numeric entry (" + before.row_labels[i] + ", " + before.columns[j].label + "): " +
                       to_string(*numeric.matrix[i][j]) + " != " + to_string(expected);
          return out;
        }
      }
    }
  out.detail = "all entries scale by " + std::to_string(cover.index());
  return out;
}

// ---------------------------------------------------------------------------------------------
// Arithmetic obstructions

BmObstruction bm_obstruction(const Integer& f, const Integer& index) {
  if (f < 2) throw InvalidInput("free rank f must be at least 2");
  if (index < 2) throw InvalidInput("index must be at least 2");
  BmObstruction out;
  out.g = index * (f - 1) + 1;
  const Integer gap = out.g - 2 * f;
  out.h2_lower_bound = gap > 0 ? gap : Integer(0);
  out.excluded = out.h2_lower_bound > 0;
  return out;
}

std::vector<Integer> unitary_poincare_polynomial(int n) {
  if (n < 1) throw InvalidInput("unitary group rank must be at least 1");
  std::vector<Integer> poly{1};
  for (int i = 1; i <= n; ++i) {
    const std::size_t shift = static_cast<std::size_t>(2 * i - 1);
    std::vector<Integer> next(poly.size() + shift, 0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k];
      next[k + shift] += poly[k];
    }
    poly = std::move(next);
  }
  return poly;
}

BettiInequality betti_inequality_check(int m, int n) {
  if (m < 1 || n < 1) throw InvalidInput("betti inequality needs m, n >= 1");
  Integer total = 0;
  for (const Integer& c : unitary_poincare_polynomial(n)) total += c;
  BettiInequality out;
  out.lhs = boost::multiprecision::pow(total, static_cast<unsigned>(m));
  out.rhs = 1 + m;
  out.holds = out.lhs >= out.rhs;
  return out;
}

}  // namespace flatdetect
