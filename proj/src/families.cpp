#include "flatdetect/families.hpp"

#include "flatdetect/error.hpp"
#include "flatdetect/repvar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>

namespace flatdetect {

// ---------------------------------------------------------------------------------------------
// Parameter spaces

ParameterSpace::ParameterSpace(std::shared_ptr<const Node> node) : node_(std::move(node)) {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Torus:
      components_.push_back(ParamComponent{std::vector<int>(n.dim, n.resolution)});
      break;
    case Kind::Points:
      components_.assign(n.count, ParamComponent{});
      break;
    case Kind::Product:
      for (const auto& l : n.children[0].components())
        for (const auto& r : n.children[1].components()) {
          ParamComponent c = l;
          c.resolutions.insert(c.resolutions.end(), r.resolutions.begin(), r.resolutions.end());
          components_.push_back(std::move(c));
        }
      break;
    case Kind::DisjointUnion:
      components_ = n.children[0].components();
      components_.insert(components_.end(), n.children[1].components().begin(), n.children[1].components().end());
      break;
  }
  for (const auto& c : components_)
    if (c.dim() > kMaxLabels) throw InvalidInput("parameter space has more than 32 torus directions");
}

ParameterSpace ParameterSpace::torus(int dim, int resolution) {
  if (dim < 1) throw InvalidInput("torus dimension must be at least 1");
  if (resolution < 2) throw InvalidInput("torus grid resolution must be at least 2");
  Node n;
  n.kind = Kind::Torus;
  n.dim = dim;
  n.resolution = resolution;
  return ParameterSpace(std::make_shared<const Node>(std::move(n)));
}

ParameterSpace ParameterSpace::points(int count) {
  if (count < 1) throw InvalidInput("finite point set needs at least one point");
  Node n;
  n.kind = Kind::Points;
  n.count = count;
  return ParameterSpace(std::make_shared<const Node>(std::move(n)));
}

ParameterSpace ParameterSpace::product(const ParameterSpace& left, const ParameterSpace& right) {
  Node n;
  n.kind = Kind::Product;
  n.children = {left, right};
  return ParameterSpace(std::make_shared<const Node>(std::move(n)));
}

ParameterSpace ParameterSpace::disjoint_union(const ParameterSpace& left, const ParameterSpace& right) {
  Node n;
  n.kind = Kind::DisjointUnion;
  n.children = {left, right};
  return ParameterSpace(std::make_shared<const Node>(std::move(n)));
}

std::string ParameterSpace::describe() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Torus:
      return "T^" + std::to_string(n.dim) + "[" + std::to_string(n.resolution) + "]";
    case Kind::Points:
      return "points(" + std::to_string(n.count) + ")";
    case Kind::Product:
      return "(" + n.children[0].describe() + " x " + n.children[1].describe() + ")";
    case Kind::DisjointUnion:
      break;
  }
  return "(" + n.children[0].describe() + " + " + n.children[1].describe() + ")";
}

bool ParameterSpace::operator==(const ParameterSpace& other) const {
  return node_ == other.node_ || describe() == other.describe();
}

// ---------------------------------------------------------------------------------------------
// Family

Family::Family(GroupPresentation group, ParameterSpace space, std::vector<int> fiber_dims, Evaluator evaluate,
               std::string structure, std::optional<std::vector<MultiForm>> chern)
    : group_(std::move(group)),
      space_(std::move(space)),
      fiber_dims_(std::move(fiber_dims)),
      evaluate_(std::move(evaluate)),
      structure_(std::move(structure)),
      chern_(std::move(chern)) {
  const auto& comps = space_.components();
  if (fiber_dims_.size() != comps.size()) throw InvalidInput("one fiber dimension per parameter component is required");
  for (int k : fiber_dims_)
    if (k < 1) throw InvalidInput("fiber dimension must be at least 1");
  if (!evaluate_) throw InvalidInput("family without an evaluation rule");
  if (chern_) {
    if (chern_->size() != comps.size()) throw InvalidInput("one Chern character per parameter component is required");
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const LabelSpace expected{static_cast<int>(group_.generator_count()), comps[c].dim()};
      if (!((*chern_)[c].space() == expected)) throw InvalidInput("Chern character uses the wrong label space");
      if ((*chern_)[c].scalar_part() != fiber_dims_[c])
        throw InvalidInput("degree-0 part of the Chern character differs from the fiber dimension");
    }
  }
}

const std::vector<MultiForm>& Family::chern() const {
  if (!chern_) throw InvalidInput("family '" + structure_ + "' carries no exact Chern data");
  return *chern_;
}

RepPoint Family::evaluate(const ParamPoint& p) const {
  const auto& comps = space_.components();
  if (p.component >= comps.size()) throw InvalidInput("parameter component out of range");
  if (p.coords.size() != static_cast<std::size_t>(comps[p.component].dim()))
    throw InvalidInput("parameter point has the wrong number of coordinates");
  return evaluate_(p);
}

std::vector<ParamPoint> Family::sample_points(std::size_t max_per_component) const {
  std::vector<ParamPoint> out;
  const auto& comps = space_.components();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const int d = comps[c].dim();
    if (d == 0) {
      out.push_back(ParamPoint{c, {}});
      continue;
    }
    double total = 1.0;
    for (int r : comps[c].resolutions) total *= r;
    std::vector<int> counts = comps[c].resolutions;
    if (total > static_cast<double>(max_per_component)) {
      const int per_axis = std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(max_per_component), 1.0 / d))));
      for (auto& m : counts) m = std::min(m, per_axis);
    }
    std::vector<int> idx(d, 0);
    while (true) {
      ParamPoint p{c, std::vector<double>(d)};
      for (int a = 0; a < d; ++a) {
        const int r = comps[c].resolutions[a];
        const int node = static_cast<int>((static_cast<long>(idx[a]) * r) / counts[a]);
        p.coords[a] = static_cast<double>(node) / r;
      }
      out.push_back(std::move(p));
      int a = 0;
      while (a < d && ++idx[a] == counts[a]) idx[a++] = 0;
      if (a == d) break;
    }
  }
  return out;
}

FamilyCheck verify_family(const Family& f, double tol, std::size_t max_per_component) {
  FamilyCheck check;
  for (const ParamPoint& p : f.sample_points(max_per_component)) {
    const RepPoint rp = f.evaluate(p);
    ++check.points;
    double defect = 0.0;
    try {
      defect = relator_defect(rp, f.group());
    } catch (const InvalidInput&) {
      defect = std::numeric_limits<double>::infinity();
    }
    if (rp.dimension() != f.fiber_dims()[p.component]) defect = std::numeric_limits<double>::infinity();
    check.max_defect = std::max(check.max_defect, defect);
    check.max_unitarity = std::max(check.max_unitarity, unitarity_deviation(rp));
  }
  check.passed = check.max_defect <= tol && check.max_unitarity <= tol;
  return check;
}

// ---------------------------------------------------------------------------------------------
// Presentations

namespace {

Word commutator(std::size_t i, std::size_t j) { return Word{{{i, false}, {j, false}, {i, true}, {j, true}}}; }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

GroupPresentation free_abelian_group(int n) {
  if (n < 0) throw InvalidInput("rank must be nonnegative");
  std::vector<std::string> names;
  std::vector<Word> rels;
  for (int i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) rels.push_back(commutator(i, j));
  return GroupPresentation(std::move(names), std::move(rels));
}

GroupPresentation free_group(int m) {
  if (m < 0) throw InvalidInput("rank must be nonnegative");
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("a" + std::to_string(i + 1));
  return GroupPresentation(std::move(names), {});
}

GroupPresentation surface_group(int genus) {
  if (genus < 1) throw InvalidInput("surface genus must be at least 1");
  std::vector<std::string> names;
  Word rel;
  for (int i = 0; i < genus; ++i) {
    names.push_back("a" + std::to_string(i + 1));
    names.push_back("b" + std::to_string(i + 1));
    const Word c = commutator(2 * i, 2 * i + 1);
    rel = rel * c;
  }
  return GroupPresentation(std::move(names), {rel});
}

GroupPresentation klein_bottle_group() { return parse_presentation("gens: a b; rels: a b a b^-1;"); }

namespace {

std::vector<std::string> joined_names(const GroupPresentation& g1, const GroupPresentation& g2) {
  std::vector<std::string> names = g1.generators();
  for (std::string name : g2.generators()) {
    while (std::find(names.begin(), names.end(), name) != names.end()) name += "_2";
    names.push_back(name);
  }
  return names;
}

std::vector<Word> joined_relators(const GroupPresentation& g1, const GroupPresentation& g2) {
  std::vector<Word> rels = g1.relators();
  for (Word r : g2.relators()) {
    for (Letter& l : r.letters) l.generator += g1.generator_count();
    rels.push_back(std::move(r));
  }
  return rels;
}

}  // namespace

GroupPresentation direct_product(const GroupPresentation& g1, const GroupPresentation& g2) {
  std::vector<Word> rels = joined_relators(g1, g2);
  const std::size_t n1 = g1.generator_count();
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < g2.generator_count(); ++j) rels.push_back(commutator(i, n1 + j));
  return GroupPresentation(joined_names(g1, g2), std::move(rels));
}

GroupPresentation free_product(const GroupPresentation& g1, const GroupPresentation& g2) {
  return GroupPresentation(joined_names(g1, g2), joined_relators(g1, g2));
}

// ---------------------------------------------------------------------------------------------
// Combinators

Family character_family(const std::vector<std::vector<int>>& windings, int resolution) {
  const int n = static_cast<int>(windings.size());
  if (n < 1) throw InvalidInput("character family needs at least one generator");
  const int d = static_cast<int>(windings.front().size());
  if (d < 1) throw InvalidInput("character family needs at least one parameter direction");
  for (const auto& row : windings)
    if (static_cast<int>(row.size()) != d) throw InvalidInput("winding matrix rows have different lengths");

  const LabelSpace space{n, d};
  MultiForm c1(space);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < d; ++k)
      if (windings[j][k] != 0) c1.add_term(base_bit(j) | param_bit(k), windings[j][k]);

  std::string label = "char([";
  for (int j = 0; j < n; ++j) {
    label += (j ? ", [" : "[");
    for (int k = 0; k < d; ++k) label += (k ? ", " : "") + std::to_string(windings[j][k]);
    label += "]";
  }
  label += "], " + std::to_string(resolution) + ")";

  auto eval = [windings](const ParamPoint& p) {
    RepPoint out;
    for (const auto& row : windings) {
      double phase = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) phase += row[k] * p.coords[k];
      out.matrices.push_back(Matrix::Constant(1, 1, std::polar(1.0, kTwoPi * phase)));
    }
    return out;
  };
  return Family(free_abelian_group(n), ParameterSpace::torus(d, resolution), {1}, eval, label,
                std::vector<MultiForm>{c1.exp()});
}

Family character_family_Zn(int n, int resolution) {
  if (n < 1) throw InvalidInput("character family rank must be at least 1");
  std::vector<std::vector<int>> identity(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) identity[i][i] = 1;
  Family f = character_family(identity, resolution);
  return Family(f.group(), f.space(), f.fiber_dims(), [f](const ParamPoint& p) { return f.evaluate(p); },
                "char_zn(" + std::to_string(n) + ", " + std::to_string(resolution) + ")", f.chern());
}

Family trivial_family(const GroupPresentation& group, int dim, const ParameterSpace& space) {
  if (dim < 1) throw InvalidInput("trivial family dimension must be at least 1");
  std::vector<MultiForm> chern;
  for (const auto& c : space.components())
    chern.push_back(MultiForm::scalar(LabelSpace{static_cast<int>(group.generator_count()), c.dim()}, dim));
  const std::size_t gens = group.generator_count();
  auto eval = [gens, dim](const ParamPoint&) {
    return RepPoint{std::vector<Matrix>(gens, Matrix::Identity(dim, dim))};
  };
  return Family(group, space, std::vector<int>(space.components().size(), dim), eval,
                "trivial(" + std::to_string(dim) + ")", std::move(chern));
}

Family tensor_families(const Family& f, const Family& g) {
  const GroupPresentation group = direct_product(f.group(), g.group());
  const ParameterSpace space = ParameterSpace::product(f.space(), g.space());
  const std::size_t nr = g.components().size();
  const int n1 = static_cast<int>(f.group().generator_count());
  const int n2 = static_cast<int>(g.group().generator_count());

  std::vector<int> dims;
  std::optional<std::vector<MultiForm>> chern;
  if (f.has_chern() && g.has_chern()) chern.emplace();
  for (std::size_t i = 0; i < f.components().size(); ++i)
    for (std::size_t j = 0; j < nr; ++j) {
      dims.push_back(f.fiber_dims()[i] * g.fiber_dims()[j]);
      if (chern) {
        const int d1 = f.components()[i].dim();
        const int d2 = g.components()[j].dim();
        const LabelSpace target{n1 + n2, d1 + d2};
        chern->push_back(wedge(f.chern()[i].embed(target, 0, 0), g.chern()[j].embed(target, n1, d1)));
      }
    }

  auto eval = [f, g, nr](const ParamPoint& p) {
    const std::size_t i = p.component / nr;
    const std::size_t j = p.component % nr;
    const auto d1 = static_cast<std::ptrdiff_t>(f.components()[i].dim());
    ParamPoint p1{i, std::vector<double>(p.coords.begin(), p.coords.begin() + d1)};
    ParamPoint p2{j, std::vector<double>(p.coords.begin() + d1, p.coords.end())};
    const RepPoint a = f.evaluate(p1);
    const RepPoint b = g.evaluate(p2);
    const Eigen::Index ka = f.fiber_dims()[i];
    const Eigen::Index kb = g.fiber_dims()[j];
    RepPoint out;
    for (const Matrix& m : a.matrices) out.matrices.push_back(kron(m, Matrix::Identity(kb, kb)));
    for (const Matrix& m : b.matrices) out.matrices.push_back(kron(Matrix::Identity(ka, ka), m));
    return out;
  };
  return Family(group, space, std::move(dims), eval, "tensor(" + f.structure() + ", " + g.structure() + ")",
                std::move(chern));
}

namespace {

// Subsets of {0..n-1} of size p as bitmasks, increasing.
std::vector<std::uint32_t> subsets_of_size(int n, int p) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (std::popcount(m) == p) out.push_back(m);
  return out;
}

std::vector<std::size_t> bits_of(std::uint32_t m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 32; ++i)
    if ((m >> i) & 1u) out.push_back(i);
  return out;
}

Rational minor(const RationalMatrix& m, std::uint32_t rows, std::uint32_t cols) {
  if (rows == 0) return 1;
  return m.select(bits_of(rows), bits_of(cols)).determinant();
}

void require_torus_cover(const SubgroupCover& cover) {
  if (!cover.free_abelian_model()) throw InvalidInput("exact cover maps need a torus cover of Z^n");
}

}  // namespace

MultiForm pullback_along_cover(const MultiForm& form, const SubgroupCover& cover) {
  require_torus_cover(cover);
  const RationalMatrix& m = cover.lattice();
  const int n = static_cast<int>(m.rows());
  if (form.space().base != n) throw InvalidInput("pullback: form does not live on the covered torus");
  MultiForm out(LabelSpace{n, form.space().param});
  for (const auto& [mono, c] : form.terms()) {
    const std::uint32_t s = base_part(mono);
    for (std::uint32_t t : subsets_of_size(n, std::popcount(s))) {
      const Rational det = minor(m, s, t);
      if (det != 0) out.add_term(make_monomial(t, param_part(mono)), c * det);
    }
  }
  return out;
}

MultiForm transfer_along_cover(const MultiForm& form, const SubgroupCover& cover) {
  require_torus_cover(cover);
  const RationalMatrix& m = cover.lattice();
  const int n = static_cast<int>(m.rows());
  if (form.space().base != n) throw InvalidInput("transfer: form does not live on the covering torus");
  const RationalMatrix inv = m.inverse();
  Rational degree = m.determinant();
  if (degree < 0) degree = -degree;
  MultiForm out(LabelSpace{n, form.space().param});
  for (const auto& [mono, c] : form.terms()) {
    const std::uint32_t t = base_part(mono);
    for (std::uint32_t s : subsets_of_size(n, std::popcount(t))) {
      const Rational det = minor(inv, t, s);
      if (det != 0) out.add_term(make_monomial(s, param_part(mono)), c * degree * det);
    }
  }
  return out;
}

Family induce_family(const Family& f, const SubgroupCover& cover) {
  const std::size_t d = cover.lattice_rank();
  if (f.group().generator_count() != d)
    throw InvalidInput("induced family: the family's group has " + std::to_string(f.group().generator_count()) +
                       " generators, the subgroup has " + std::to_string(d));
  const std::size_t index = cover.index();
  std::vector<int> dims;
  for (int k : f.fiber_dims()) dims.push_back(k * static_cast<int>(index));

  std::optional<std::vector<MultiForm>> chern;
  if (f.has_chern() && cover.free_abelian_model()) {
    chern.emplace();
    for (const MultiForm& c : f.chern()) chern->push_back(transfer_along_cover(c, cover));
  }

  auto eval = [f, cover, index](const ParamPoint& p) {
    const RepPoint inner = f.evaluate(p);
    const Eigen::Index k = f.fiber_dims()[p.component];
    auto subgroup_element = [&](const std::vector<long>& coords) {
      Matrix m = Matrix::Identity(k, k);
      for (std::size_t l = 0; l < coords.size(); ++l) {
        const Matrix& u = inner.matrices[l];
        const Matrix step = coords[l] < 0 ? Matrix(u.adjoint()) : u;
        for (long r = 0; r < std::abs(coords[l]); ++r) m = m * step;
      }
      return m;
    };
    RepPoint out;
    const auto big = static_cast<Eigen::Index>(index) * k;
    for (std::size_t g = 0; g < cover.group().generator_count(); ++g) {
      Matrix m = Matrix::Zero(big, big);
      for (std::size_t j = 0; j < index; ++j) {
        const auto& step = cover.action(g, j);
        m.block(static_cast<Eigen::Index>(step.target) * k, static_cast<Eigen::Index>(j) * k, k, k) =
            subgroup_element(step.coords);
      }
      out.matrices.push_back(std::move(m));
    }
    return out;
  };
  return Family(cover.group(), f.space(), std::move(dims), eval, "induce(" + f.structure() + ", " + cover.describe() + ")",
                std::move(chern));
}

Family restrict_family(const Family& f, const SubgroupCover& cover) {
  if (f.group().generators() != cover.group().generators())
    throw InvalidInput("restricted family: the family's group does not match the cover's group");
  std::optional<std::vector<MultiForm>> chern;
  if (f.has_chern() && cover.free_abelian_model()) {
    chern.emplace();
    for (const MultiForm& c : f.chern()) chern->push_back(pullback_along_cover(c, cover));
  }
  auto eval = [f, cover](const ParamPoint& p) {
    const RepPoint outer = f.evaluate(p);
    RepPoint out;
    for (const Word& w : cover.subgroup_generators()) out.matrices.push_back(evaluate_word(w, outer));
    return out;
  };
  return Family(cover.subgroup(), f.space(), f.fiber_dims(), eval, "restrict(" + f.structure() + ", " + cover.describe() + ")",
                std::move(chern));
}

Family extend_free_product(const Family& f, const GroupPresentation& g, const std::vector<std::string>& placement) {
  const GroupPresentation& g1 = f.group();
  std::vector<std::string> names = placement.empty() ? g1.generators() : placement;
  if (names.size() != g1.generator_count())
    throw InvalidInput("generator-set mismatch: placement must name one target per generator of the factor");
  std::vector<std::size_t> target;
  std::vector<int> origin(g.generator_count(), -1);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!g.has_generator(names[i])) throw InvalidInput("generator-set mismatch: '" + names[i] + "' is not a generator of the free product");
    const std::size_t t = g.index_of(names[i]);
    if (origin[t] >= 0) throw InvalidInput("generator-set mismatch: '" + names[i] + "' is used twice");
    origin[t] = static_cast<int>(i);
    target.push_back(t);
  }

  // Relators of G split into factor-1 and factor-2 relators; factor-1 ones must be f's.
  std::set<std::vector<Letter>> factor_one;
  for (const Word& r : g.relators()) {
    const bool any_one = std::any_of(r.letters.begin(), r.letters.end(), [&](const Letter& l) { return origin[l.generator] >= 0; });
    const bool any_two = std::any_of(r.letters.begin(), r.letters.end(), [&](const Letter& l) { return origin[l.generator] < 0; });
    if (any_one && any_two) throw InvalidInput("generator-set mismatch: relator mixes both free factors");
    if (any_one) {
      std::vector<Letter> mapped;
      for (const Letter& l : r.letters) mapped.push_back({static_cast<std::size_t>(origin[l.generator]), l.inverse});
      factor_one.insert(mapped);
    }
  }
  std::set<std::vector<Letter>> own;
  for (const Word& r : g1.relators()) own.insert(r.letters);
  if (own != factor_one) throw InvalidInput("generator-set mismatch: relators of the factor differ from the family's group");

  std::optional<std::vector<MultiForm>> chern;
  if (f.has_chern()) {
    chern.emplace();
    const int n = static_cast<int>(g.generator_count());
    for (const MultiForm& c : f.chern()) {
      MultiForm out(LabelSpace{n, c.space().param});
      for (const auto& [mono, coeff] : c.terms()) {
        // Relabeling can reorder labels; multiply generators in order to get the sign.
        MultiForm term = MultiForm::scalar(out.space(), coeff);
        for (std::size_t i = 0; i < target.size(); ++i)
          if ((base_part(mono) >> i) & 1u) term = wedge(term, MultiForm::base_generator(out.space(), static_cast<int>(target[i])));
        term = wedge(term, MultiForm::monomial(out.space(), make_monomial(0, param_part(mono))));
        out += term;
      }
      chern->push_back(std::move(out));
    }
  }

  auto eval = [f, origin](const ParamPoint& p) {
    const RepPoint inner = f.evaluate(p);
    const Eigen::Index k = f.fiber_dims()[p.component];
    RepPoint out;
    for (int o : origin) out.matrices.push_back(o >= 0 ? inner.matrices[o] : Matrix(Matrix::Identity(k, k)));
    return out;
  };
  return Family(g, f.space(), f.fiber_dims(), eval, "extend(" + f.structure() + ")", std::move(chern));
}

Family disjoint_union(const Family& f, const Family& g) {
  if (!(f.group() == g.group())) throw InvalidInput("disjoint union of families for different groups");
  const ParameterSpace space = ParameterSpace::disjoint_union(f.space(), g.space());
  std::vector<int> dims = f.fiber_dims();
  dims.insert(dims.end(), g.fiber_dims().begin(), g.fiber_dims().end());
  std::optional<std::vector<MultiForm>> chern;
  if (f.has_chern() && g.has_chern()) {
    chern = f.chern();
    chern->insert(chern->end(), g.chern().begin(), g.chern().end());
  }
  const std::size_t nl = f.components().size();
  auto eval = [f, g, nl](const ParamPoint& p) {
    if (p.component < nl) return f.evaluate(p);
    return g.evaluate(ParamPoint{p.component - nl, p.coords});
  };
  return Family(f.group(), space, std::move(dims), eval, "union(" + f.structure() + ", " + g.structure() + ")",
                std::move(chern));
}

Family direct_sum(const Family& f, const Family& g) {
  if (!(f.group() == g.group())) throw InvalidInput("direct sum of families for different groups");
  if (!(f.space() == g.space())) throw InvalidInput("direct sum of families over different parameter spaces");
  std::vector<int> dims;
  for (std::size_t c = 0; c < f.fiber_dims().size(); ++c) dims.push_back(f.fiber_dims()[c] + g.fiber_dims()[c]);
  std::optional<std::vector<MultiForm>> chern;
  if (f.has_chern() && g.has_chern()) {
    chern.emplace();
    for (std::size_t c = 0; c < f.chern().size(); ++c) chern->push_back(f.chern()[c] + g.chern()[c]);
  }
  auto eval = [f, g](const ParamPoint& p) {
    const RepPoint a = f.evaluate(p);
    const RepPoint b = g.evaluate(p);
    RepPoint out;
    for (std::size_t i = 0; i < a.matrices.size(); ++i) out.matrices.push_back(block_diag(a.matrices[i], b.matrices[i]));
    return out;
  };
  return Family(f.group(), f.space(), std::move(dims), eval, "sum(" + f.structure() + ", " + g.structure() + ")",
                std::move(chern));
}

}  // namespace flatdetect
