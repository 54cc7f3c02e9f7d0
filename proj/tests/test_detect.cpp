#include "flatdetect/detect.hpp"
#include "flatdetect/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <bit>
#include <random>

using namespace flatdetect;

namespace {

std::vector<long> betti_of(const GroupClassDescriptor& d) {
  std::vector<long> out;
  for (int b : rational_homology(d).betti()) out.push_back(b);
  return out;
}

// Relators of a presentation as oracle input.
std::vector<oracle::Relator> relators_of(const GroupPresentation& g) {
  std::vector<oracle::Relator> out;
  for (const Word& w : g.relators()) {
    oracle::Relator r;
    for (const Letter& l : w.letters) r.letters.emplace_back(static_cast<int>(l.generator), l.inverse ? -1 : 1);
    out.push_back(r);
  }
  return out;
}

std::vector<long> trimmed(std::vector<long> v) {
  while (v.size() > 1 && v.back() == 0) v.pop_back();
  return v;
}

std::optional<Rational> entry(const DetectionReport& r, const std::string& row, std::uint32_t x_mono) {
  for (std::size_t i = 0; i < r.row_labels.size(); ++i)
    if (r.row_labels[i] == row)
      for (std::size_t c = 0; c < r.columns.size(); ++c)
        if (r.columns[c].x_monomial == x_mono) return r.matrix[i][c];
  FAIL("no such entry");
  return std::nullopt;
}

GroupClassDescriptor klein_descriptor() {
  return GroupClassDescriptor::finite_index_super(GroupClassDescriptor::free_abelian(2), 2, "klein",
                                                  klein_bottle_group(), HomologyTable{{1, 1}, {"b"}});
}

MultiForm random_form(std::mt19937_64& rng, LabelSpace s, int terms) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<std::uint32_t> base(0, (1u << s.base) - 1), param(0, (1u << s.param) - 1);
  MultiForm f(s);
  for (int t = 0; t < terms; ++t) f.add_term(make_monomial(base(rng), param(rng)), coeff(rng));
  return f;
}

}  // namespace

TEST_CASE("rational homology of the model groups") {
  CHECK(betti_of(GroupClassDescriptor::free_abelian(3)) == std::vector<long>{1, 3, 3, 1});
  CHECK(betti_of(GroupClassDescriptor::free_abelian(4)) == std::vector<long>{1, 4, 6, 4, 1});
  // Free and surface groups have aspherical presentation complexes.
  const auto free2 = GroupClassDescriptor::free(2);
  CHECK(betti_of(free2) == trimmed(oracle::presentation_complex_betti(2, relators_of(free2.presentation()))));
  const auto surf = GroupClassDescriptor::surface(2);
  CHECK(betti_of(surf) == oracle::presentation_complex_betti(4, relators_of(surf.presentation())));
  CHECK(betti_of(surf) == std::vector<long>{1, 4, 1});
  CHECK(betti_of(GroupClassDescriptor::free_product(GroupClassDescriptor::free_abelian(2), free2)) ==
        std::vector<long>{1, 4, 1});
  CHECK(betti_of(GroupClassDescriptor::direct_product(free2, GroupClassDescriptor::free(1))) ==
        std::vector<long>{1, 3, 2});
  CHECK(betti_of(klein_descriptor()) == std::vector<long>{1, 1});
  CHECK_THROWS_AS(rational_homology(GroupClassDescriptor::finite_index_super(GroupClassDescriptor::free_abelian(2), 2,
                                                                             "k", klein_bottle_group())),
                  InvalidInput);
}

TEST_CASE("Z^n character families give the signed permutation") {
  for (int n = 1; n <= 4; ++n) {
    const auto d = GroupClassDescriptor::free_abelian(n);
    const auto r = detection_matrix(d, {character_family_Zn(n, 8)});
    const auto basis = rational_homology(d);
    REQUIRE(r.matrix.size() == basis.classes.size());
    CHECK(r.verdict == Verdict::FdCertified);
    for (std::size_t i = 0; i < r.matrix.size(); ++i) {
      REQUIRE(basis.classes[i].functional.size() == 1);
      const std::uint32_t s = basis.classes[i].functional[0].first;
      std::vector<int> subset;
      for (int j = 0; j < n; ++j)
        if ((s >> j) & 1u) subset.push_back(j);
      for (std::size_t c = 0; c < r.columns.size(); ++c) {
        const Rational expected = r.columns[c].x_monomial == s ? Rational(oracle::character_sign(subset)) : Rational(0);
        CHECK(r.matrix[i][c] == expected);
      }
    }
  }
}

TEST_CASE("trivial families only detect the point class") {
  const auto d = GroupClassDescriptor::surface(2);
  const auto r = detection_matrix(d, {trivial_family(d.presentation(), 2, ParameterSpace::torus(2, 4))});
  CHECK(r.detected[0]);
  CHECK(entry(r, r.row_labels[0], 0) == Rational(2));
  for (std::size_t i = 1; i < r.detected.size(); ++i) CHECK_FALSE(r.detected[i]);
  CHECK(r.verdict == Verdict::Undetected);
  CHECK(r.undetected.size() == 5);
}

TEST_CASE("detection of a union is the union of detections") {
  const auto d = GroupClassDescriptor::free_abelian(2);
  const auto f = character_family({{1}, {0}}, 8), g = character_family({{0}, {1}}, 8);
  const auto rf = detection_matrix(d, {f}), rg = detection_matrix(d, {g});
  const auto ru = detection_matrix(d, {disjoint_union(f, g)});
  const auto both = detection_matrix(d, {f, g});
  for (std::size_t i = 0; i < ru.detected.size(); ++i) {
    CHECK(ru.detected[i] == (rf.detected[i] || rg.detected[i]));
    CHECK(both.detected[i] == ru.detected[i]);
  }
  CHECK(ru.verdict == Verdict::Undetected);
  CHECK(ru.undetected == std::vector<std::string>{"[e1^e2]"});
}

TEST_CASE("adding a trivial summand only changes the rank row") {
  const auto d = GroupClassDescriptor::free_abelian(3);
  const auto f = character_family_Zn(3, 4);
  const auto a = detection_matrix(d, {f});
  const auto b = detection_matrix(d, {direct_sum(f, trivial_family(f.group(), 2, f.space()))});
  for (std::size_t i = 0; i < a.matrix.size(); ++i)
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
      if (a.row_degrees[i] == 0 && a.columns[c].x_monomial == 0) CHECK(*b.matrix[i][c] == *a.matrix[i][c] + 2);
      else CHECK(b.matrix[i][c] == a.matrix[i][c]);
    }
}

TEST_CASE("Kunneth: tensor families detect product classes") {
  const auto d = GroupClassDescriptor::direct_product(GroupClassDescriptor::free_abelian(1),
                                                      GroupClassDescriptor::free_abelian(1));
  const auto r = detection_matrix(d, {tensor_families(character_family_Zn(1, 8), character_family_Zn(1, 8))});
  CHECK(r.verdict == Verdict::FdCertified);
  CHECK(r.matrix.size() == 4);
  // z1 x1 ^ z2 x2 = - z1 z2 x1 x2
  CHECK(r.matrix.back().back() == Rational(-1));
}

TEST_CASE("free group families detect each generator without cross terms") {
  const auto d = GroupClassDescriptor::free(2);
  const auto g = d.presentation();
  const auto circle = character_family_Zn(1, 8);
  const auto f = disjoint_union(extend_free_product(circle, g, {"a1"}), extend_free_product(circle, g, {"a2"}));
  const auto r = detection_matrix(d, {f});
  CHECK(r.verdict == Verdict::FdCertified);
  CHECK(r.matrix[1] == std::vector<std::optional<Rational>>{Rational(0), Rational(1), Rational(0), Rational(0)});
  CHECK(r.matrix[2] == std::vector<std::optional<Rational>>{Rational(0), Rational(0), Rational(0), Rational(1)});
}

TEST_CASE("numeric pairing agrees with exact pairing where defined") {
  const auto d = GroupClassDescriptor::free_abelian(2);
  const auto f = character_family({{2, 1}, {-1, 3}}, 32);
  const auto exact = detection_matrix(d, {f});
  const auto numeric = numeric_detection_matrix(d, {f});
  CHECK(numeric.numeric);
  for (std::size_t i = 0; i < exact.matrix.size(); ++i)
    for (std::size_t c = 0; c < exact.columns.size(); ++c) {
      if (numeric.matrix[i][c]) CHECK(*numeric.matrix[i][c] == *exact.matrix[i][c]);
      else CHECK(exact.row_degrees[i] == 2);
    }
  CHECK(numeric.verdict == Verdict::Obstructed);
  CHECK_THROWS_AS(detection_matrix(klein_descriptor(), {induce_family(character_family_Zn(2, 8), klein_cover())}),
                  InvalidInput);
}

TEST_CASE("Klein bottle: the induced family pairs nontrivially with [b]") {
  const auto r = numeric_detection_matrix(klein_descriptor(), {induce_family(character_family_Zn(2, 32), klein_cover())});
  CHECK(r.verdict == Verdict::FdCertified);
  CHECK(entry(r, r.row_labels[0], 0) == Rational(2));
  CHECK(entry(r, r.row_labels[1], 2u) == Rational(1));
  CHECK(entry(r, r.row_labels[1], 1u) == Rational(0));
}

TEST_CASE("families for the wrong group are rejected") {
  CHECK_THROWS_AS(detection_matrix(GroupClassDescriptor::free_abelian(3), {character_family_Zn(2, 4)}), InvalidInput);
  CHECK_THROWS_AS(detection_matrix(GroupClassDescriptor::free_abelian(2), {}), InvalidInput);
}

TEST_CASE("transfer scaling") {
  const auto one = trivial_family(free_abelian_group(1), 1, ParameterSpace::points(1));
  for (int k : {1, 2, 3}) {
    const auto t = transfer_scaling_check(one, circle_cover(k));
    CHECK(t.passed);
    CHECK(t.index == static_cast<std::size_t>(k));
  }
  const auto t = transfer_scaling_check(character_family_Zn(1, 32), circle_cover(5));
  CHECK(t.passed);
  CHECK(t.numeric_entries > 0);
}

TEST_CASE("slant contraction is natural and a module map") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> small(-2, 2);
  for (int trial = 0; trial < 60; ++trial) {
    RationalMatrix m(2, 2);
    do {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = small(rng);
    } while (m.determinant() == 0);
    const auto cover = torus_cover(m);
    const LabelSpace s{2, 2};
    const MultiForm ch = random_form(rng, s, 5);
    for (const HomologyClass& c : rational_homology(GroupClassDescriptor::free_abelian(2)).classes) {
      CHECK(slant_contract(pullback_along_cover(ch, cover), c) == slant_contract(ch, pushforward_class(c, cover)));
      const MultiForm alpha = random_form(rng, LabelSpace{0, 2}, 2);
      const MultiForm lifted = alpha.embed(s, 0, 0);
      CHECK(slant_contract(wedge(ch, lifted), c) == wedge(slant_contract(ch, c), alpha));
      const int deg_alpha = [&] {
        int dg = 0;
        return alpha.is_homogeneous(&dg) ? dg : -1;
      }();
      if (deg_alpha >= 0) {
        const Rational koszul = (deg_alpha * c.degree) % 2 ? -1 : 1;
        CHECK(slant_contract(wedge(lifted, ch), c) == wedge(alpha, slant_contract(ch, c)) * koszul);
      }
    }
  }
}

TEST_CASE("Euler characteristic obstruction arithmetic") {
  const auto a = bm_obstruction(2, 10);
  CHECK(a.g == 11);
  CHECK(a.h2_lower_bound == 7);
  CHECK(a.excluded);
  const auto b = bm_obstruction(2, 2);
  CHECK(b.g == 3);
  CHECK(b.h2_lower_bound == 0);
  CHECK_FALSE(b.excluded);
  const auto c = bm_obstruction(3, 4);
  CHECK(c.g == 9);
  CHECK(c.h2_lower_bound == 3);
  CHECK(c.excluded);
  const auto big = bm_obstruction(Integer("100000000000000000000"), Integer("3"));
  CHECK(big.g == Integer("299999999999999999998"));
  CHECK_THROWS_AS(bm_obstruction(1, 5), InvalidInput);
  CHECK_THROWS_AS(bm_obstruction(2, 1), InvalidInput);
}

TEST_CASE("Betti inequality for free groups into U(n)") {
  CHECK(unitary_poincare_polynomial(2) == std::vector<Integer>{1, 1, 0, 1, 1});
  const auto t2 = oracle::torus_simplicial_betti(3);
  const auto r = betti_inequality_check(2, 1);
  CHECK(r.lhs == t2[0] + t2[1] + t2[2]);
  CHECK(r.rhs == 3);
  CHECK(r.holds);
  CHECK(betti_inequality_check(1, 1).lhs == 2);
  CHECK(betti_inequality_check(1, 1).rhs == 2);
  CHECK(betti_inequality_check(2, 2).lhs == 16);
  CHECK_THROWS_AS(betti_inequality_check(0, 1), InvalidInput);
}
