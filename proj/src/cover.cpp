#include "flatdetect/cover.hpp"

#include "flatdetect/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace flatdetect {

AffineMap AffineMap::identity(std::size_t d) { return AffineMap{RationalMatrix::identity(d), RationalMatrix(d, 1)}; }

AffineMap AffineMap::compose(const AffineMap& inner) const {
  RationalMatrix t = linear * inner.translation;
  for (std::size_t i = 0; i < t.rows(); ++i) t(i, 0) += translation(i, 0);
  return AffineMap{linear * inner.linear, t};
}

AffineMap AffineMap::inverse() const {
  const RationalMatrix inv = linear.inverse();
  RationalMatrix t = inv * translation;
  for (std::size_t i = 0; i < t.rows(); ++i) t(i, 0) = -t(i, 0);
  return AffineMap{inv, t};
}

bool AffineMap::is_translation() const { return linear == RationalMatrix::identity(dim()); }

bool AffineMap::is_identity() const { return is_translation() && translation == RationalMatrix(dim(), 1); }

namespace {

GroupPresentation free_abelian_presentation(const std::vector<std::string>& names) {
  std::vector<Word> rels;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      rels.push_back(Word{{{i, false}, {j, false}, {i, true}, {j, true}}});
  return GroupPresentation(names, std::move(rels));
}

}  // namespace

SubgroupCover::SubgroupCover(GroupPresentation group, std::vector<AffineMap> model,
                             std::vector<Word> subgroup_generators, std::vector<Word> cosets,
                             std::vector<std::string> subgroup_names)
    : group_(std::move(group)),
      model_(std::move(model)),
      subgroup_generators_(std::move(subgroup_generators)),
      cosets_(std::move(cosets)) {
  if (model_.size() != group_.generator_count())
    throw InvalidInput("affine model must give one map per group generator");
  if (model_.empty()) throw InvalidInput("affine model of a group without generators");
  const std::size_t d = model_.front().dim();
  for (const AffineMap& m : model_) {
    if (m.dim() != d || m.linear.cols() != d || m.translation.rows() != d || m.translation.cols() != 1)
      throw InvalidInput("affine model maps have inconsistent dimensions");
    if (m.linear.determinant() == 0) throw InvalidInput("affine model map is not invertible");
  }
  for (const Word& r : group_.relators())
    if (!image(r).is_identity()) throw InvalidInput("relator '" + group_.format_word(r) + "' is not the identity in the affine model");

  if (subgroup_generators_.size() != d)
    throw InvalidInput("subgroup needs exactly " + std::to_string(d) + " generators (a full-rank translation lattice)");
  lattice_ = RationalMatrix(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const AffineMap m = image(subgroup_generators_[j]);
    if (!m.is_translation())
      throw InvalidInput("subgroup generator '" + group_.format_word(subgroup_generators_[j]) + "' is not a translation");
    for (std::size_t i = 0; i < d; ++i) lattice_(i, j) = m.translation(i, 0);
  }
  if (lattice_.determinant() == 0) throw InvalidInput("subgroup generators do not span a full-rank lattice");
  lattice_inverse_ = lattice_.inverse();

  if (subgroup_names.empty())
    for (std::size_t i = 0; i < d; ++i) subgroup_names.push_back("s" + std::to_string(i + 1));
  if (subgroup_names.size() != d) throw InvalidInput("one subgroup generator name per lattice direction");
  subgroup_ = free_abelian_presentation(subgroup_names);

  if (cosets_.empty()) throw InvalidInput("coset system is empty");
  bool has_identity_coset = false;
  for (std::size_t i = 0; i < cosets_.size(); ++i) {
    if (subgroup_coordinates(cosets_[i])) has_identity_coset = true;
    for (std::size_t j = i + 1; j < cosets_.size(); ++j)
      if (subgroup_coordinates(cosets_[i].inverse() * cosets_[j]))
        throw InvalidInput("coset representatives " + std::to_string(i) + " and " + std::to_string(j) + " lie in the same coset");
  }
  if (!has_identity_coset) throw InvalidInput("no coset representative lies in the subgroup itself");

  action_.resize(group_.generator_count());
  for (std::size_t g = 0; g < group_.generator_count(); ++g) {
    for (std::size_t j = 0; j < cosets_.size(); ++j) {
      std::optional<CosetStep> step;
      for (std::size_t i = 0; i < cosets_.size() && !step; ++i) {
        const Word probe = cosets_[i].inverse() * Word::generator(g) * cosets_[j];
        if (auto coords = subgroup_coordinates(probe)) step = CosetStep{i, std::move(*coords)};
      }
      if (!step)
        throw InvalidInput("invalid coset system: " + group_.generators()[g] + " times coset " + std::to_string(j) +
                           " hits no listed coset");
      action_[g].push_back(std::move(*step));
    }
  }

  free_abelian_ = group_.generator_count() == d;
  for (std::size_t g = 0; g < group_.generator_count() && free_abelian_; ++g) {
    if (!model_[g].is_translation()) free_abelian_ = false;
    for (std::size_t i = 0; i < d && free_abelian_; ++i)
      if (model_[g].translation(i, 0) != (i == g ? 1 : 0)) free_abelian_ = false;
  }
}

AffineMap SubgroupCover::image(const Word& w) const {
  AffineMap out = AffineMap::identity(model_.front().dim());
  for (const Letter& l : w.letters) {
    const AffineMap& m = model_.at(l.generator);
    out = out.compose(l.inverse ? m.inverse() : m);
  }
  return out;
}

std::optional<std::vector<long>> SubgroupCover::subgroup_coordinates(const Word& w) const {
  const AffineMap m = image(w);
  if (!m.is_translation()) return std::nullopt;
  const RationalMatrix c = lattice_inverse_ * m.translation;
  std::vector<long> out;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    if (!is_integer(c(i, 0))) return std::nullopt;
    out.push_back(numerator(c(i, 0)).convert_to<long>());
  }
  return out;
}

std::string SubgroupCover::describe() const {
  std::string out = "cover(index " + std::to_string(index()) + "; subgroup <";
  for (std::size_t i = 0; i < subgroup_generators_.size(); ++i) {
    if (i) out += ", ";
    out += group_.format_word(subgroup_generators_[i]);
  }
  out += ">; cosets [";
  for (std::size_t i = 0; i < cosets_.size(); ++i) {
    if (i) out += ", ";
    out += cosets_[i].empty() ? "e" : group_.format_word(cosets_[i]);
  }
  return out + "])";
}

namespace {

Word power(std::size_t gen, long exponent) {
  Word w;
  for (long i = 0; i < std::abs(exponent); ++i) w.letters.push_back({gen, exponent < 0});
  return w;
}

}  // namespace

SubgroupCover circle_cover(int k) {
  if (k < 1) throw InvalidInput("circle cover index must be positive");
  RationalMatrix lattice(1, 1);
  lattice(0, 0) = k;
  return torus_cover(lattice);
}

SubgroupCover torus_cover(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw InvalidInput("torus cover needs a square lattice matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!is_integer(m(i, j))) throw InvalidInput("torus cover lattice must be integral");
  const Rational det = m.determinant();
  if (det == 0) throw InvalidInput("torus cover lattice is degenerate");
  const long index = numerator(det < 0 ? Rational(-det) : det).convert_to<long>();

  std::vector<std::string> names;
  std::vector<AffineMap> model;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("e" + std::to_string(i + 1));
    AffineMap t = AffineMap::identity(n);
    t.translation(i, 0) = 1;
    model.push_back(t);
  }
  std::vector<Word> rels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) rels.push_back(Word{{{i, false}, {j, false}, {i, true}, {j, true}}});
  GroupPresentation group(names, rels);

  std::vector<Word> gens;
  for (std::size_t j = 0; j < n; ++j) {
    Word w;
    for (std::size_t i = 0; i < n; ++i) w = w * power(i, numerator(m(i, j)).convert_to<long>());
    gens.push_back(w);
  }

  const RationalMatrix inv = m.inverse();
  std::vector<std::vector<long>> reps;
  std::vector<long> v(n, 0);
  while (static_cast<long>(reps.size()) < index) {
    bool fresh = true;
    for (const auto& u : reps) {
      bool same = true;
      for (std::size_t i = 0; i < n && same; ++i) {
        Rational c = 0;
        for (std::size_t j = 0; j < n; ++j) c += inv(i, j) * (v[j] - u[j]);
        same = is_integer(c);
      }
      if (same) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(v);
    if (static_cast<long>(reps.size()) == index) break;
    std::size_t pos = n;
    while (pos-- > 0) {
      if (++v[pos] < index) break;
      v[pos] = 0;
      if (pos == 0) throw InvalidInput("failed to enumerate coset representatives");
    }
  }
  std::vector<Word> cosets;
  for (const auto& r : reps) {
    Word w;
    for (std::size_t i = 0; i < n; ++i) w = w * power(i, r[i]);
    cosets.push_back(w);
  }
  return SubgroupCover(group, model, gens, cosets);
}

SubgroupCover klein_cover() {
  const GroupPresentation klein = parse_presentation("gens: a b; rels: a b a b^-1;");
  AffineMap a = AffineMap::identity(2);
  a.translation(0, 0) = 1;
  AffineMap b = AffineMap::identity(2);
  b.linear(0, 0) = -1;
  b.translation(1, 0) = Rational(1, 2);
  const Word wa = Word::generator(0);
  const Word wb = Word::generator(1);
  return SubgroupCover(klein, {a, b}, {wa, wb * wb}, {Word{}, wb});
}

namespace {

RationalMatrix json_matrix(const nlohmann::json& j, std::size_t rows, std::size_t cols, const char* what) {
  if (!j.is_array() || j.size() != rows) throw InvalidInput(std::string("cover file: bad ") + what);
  RationalMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (cols == 1 && !j[i].is_array()) {
      out(i, 0) = parse_rational(j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      continue;
    }
    if (!j[i].is_array() || j[i].size() != cols) throw InvalidInput(std::string("cover file: bad ") + what);
    for (std::size_t k = 0; k < cols; ++k)
      out(i, k) = parse_rational(j[i][k].is_string() ? j[i][k].get<std::string>() : j[i][k].dump());
  }
  return out;
}

}  // namespace

SubgroupCover parse_cover_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("cover file is not valid JSON: ") + e.what(), 1, static_cast<int>(e.byte));
  }
  try {
    const GroupPresentation group = parse_presentation(doc.at("group").get<std::string>());
    const auto& model_json = doc.at("model");
    std::vector<AffineMap> model;
    std::size_t d = 0;
    for (const auto& name : group.generators()) {
      const auto& entry = model_json.at(name);
      d = entry.at("translation").size();
      model.push_back(AffineMap{json_matrix(entry.at("linear"), d, d, "linear part"),
                                json_matrix(entry.at("translation"), d, 1, "translation")});
    }
    std::vector<Word> subgroup;
    for (const auto& w : doc.at("subgroup")) subgroup.push_back(parse_word(w.get<std::string>(), group));
    std::vector<Word> cosets;
    for (const auto& w : doc.at("cosets")) cosets.push_back(parse_word(w.get<std::string>(), group));
    std::vector<std::string> names;
    if (doc.contains("subgroup_names")) names = doc.at("subgroup_names").get<std::vector<std::string>>();
    return SubgroupCover(group, std::move(model), std::move(subgroup), std::move(cosets), std::move(names));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("cover file: ") + e.what());
  }
}

SubgroupCover load_cover(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open cover file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cover_json(buf.str());
}

}  // namespace flatdetect
