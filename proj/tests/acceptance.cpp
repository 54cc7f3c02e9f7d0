// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "flatdetect/charforms.hpp"
#include "flatdetect/detect.hpp"
#include "flatdetect/families.hpp"
#include "flatdetect/repvar.hpp"
#include "oracles.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace flatdetect;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first failure; later checks still run so the detail stays informative.
struct Checker {
  Outcome out;
  void require(bool cond, const std::string& what) {
    if (!cond && out.ok) {
      out.ok = false;
      out.detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

// 1 ------------------------------------------------------------------------------------------
Outcome poincare_curvature() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto conn = poincare_connection(64);
  double dev = 0.0;
  for (const Matrix& f : numerical_curvature(conn, 1, 0)) dev = std::max(dev, std::abs(f(0, 0) - Complex(0, kTwoPi)));
  const ChernNumber zx = chern_number(conn, 0, 1), xz = chern_number(conn, 1, 0);
  const double elapsed = seconds_since(t0);
  c.require(dev <= 1e-9, "curvature deviation " + fmt(dev));
  c.require(std::abs(zx.value) == 1 && xz.value == -zx.value, "chern number not +-1");
  c.require(zx.residual <= 1e-6 && xz.residual <= 1e-6, "chern residual " + fmt(zx.residual));
  c.require(elapsed < 1.0, "took " + fmt(elapsed) + " s");
  if (c.out.ok)
    c.out.detail = "max |F_xz - 2 pi i| = " + fmt(dev) + ", c1(z,x) = " + std::to_string(zx.value) +
                   ", residual " + fmt(zx.residual) + ", " + fmt(elapsed) + " s";
  return c.out;
}

// 2 ------------------------------------------------------------------------------------------
Outcome zn_certificate() {
  Checker c;
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto d = GroupClassDescriptor::free_abelian(n);
    const auto r = detection_matrix(d, {character_family_Zn(n, 8)});
    const double elapsed = seconds_since(t0);
    worst = std::max(worst, elapsed);
    const auto basis = rational_homology(d);
    const std::size_t size = std::size_t{1} << n;
    c.require(r.matrix.size() == size && r.columns.size() == size, "matrix is not 2^n square for n=" + std::to_string(n));
    c.require(r.verdict == Verdict::FdCertified, "verdict not FD-certified for n=" + std::to_string(n));
    std::vector<int> col_hits(r.columns.size(), 0);
    for (std::size_t i = 0; i < r.matrix.size(); ++i) {
      int row_hits = 0;
      const std::uint32_t s = basis.classes[i].functional.at(0).first;
      std::vector<int> subset;
      for (int j = 0; j < n; ++j)
        if ((s >> j) & 1u) subset.push_back(j);
      for (std::size_t k = 0; k < r.columns.size(); ++k) {
        const auto& e = r.matrix[i][k];
        c.require(e.has_value(), "null entry");
        if (!e || *e == 0) continue;
        ++row_hits;
        ++col_hits[k];
        c.require(r.columns[k].x_monomial == s && *e == oracle::character_sign(subset),
                  "entry differs from the sign oracle at " + r.row_labels[i]);
      }
      c.require(row_hits == 1, "row " + r.row_labels[i] + " is not a signed unit vector");
    }
    for (int h : col_hits) c.require(h == 1, "column is not a signed unit vector");
    c.require(elapsed < 1.0, "n=" + std::to_string(n) + " took " + fmt(elapsed) + " s");
  }
  if (c.out.ok) c.out.detail = "n = 1..4 signed permutations, slowest " + fmt(worst) + " s";
  return c.out;
}

// 3 ------------------------------------------------------------------------------------------
std::vector<std::vector<int>> random_windings(std::mt19937_64& rng, int n, int d) {
  std::uniform_int_distribution<int> w(-2, 2);
  std::vector<std::vector<int>> out(n, std::vector<int>(d));
  for (auto& row : out)
    for (int& v : row) v = w(rng);
  return out;
}

// A random family with exact Chern data: a character family, optionally summed with a trivial
// or a second character family, or induced along a circle cover.
Family random_structured_family(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 2), kind(0, 3);
  const int k = kind(rng);
  if (k == 3) {
    std::uniform_int_distribution<int> idx(2, 3);
    return induce_family(character_family(random_windings(rng, 1, dim(rng)), 4), circle_cover(idx(rng)));
  }
  const int n = dim(rng), d = dim(rng);
  Family f = character_family(random_windings(rng, n, d), 4);
  if (k == 1) return direct_sum(f, trivial_family(f.group(), 1, f.space()));
  if (k == 2) return direct_sum(f, character_family(random_windings(rng, n, d), 4));
  return f;
}

Outcome tensor_multiplicativity() {
  Checker c;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t points = 0;
  double worst = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const Family f = random_structured_family(rng), g = random_structured_family(rng);
    const Family t = tensor_families(f, g);
    const int nf = static_cast<int>(f.group().generator_count());
    const int df = f.components()[0].dim(), dg = g.components()[0].dim();
    const LabelSpace s{nf + static_cast<int>(g.group().generator_count()), df + dg};
    const MultiForm expected = wedge(f.chern()[0].embed(s, 0, 0), g.chern()[0].embed(s, nf, df));
    c.require(t.chern()[0] == expected, "chern(tensor) != chern(f) ^ chern(g) for pair " + std::to_string(pair));

    for (int sample = 0; sample < 20; ++sample, ++points) {
      std::vector<double> xf(df), xg(dg);
      for (double& v : xf) v = u(rng);
      for (double& v : xg) v = u(rng);
      std::vector<double> xt = xf;
      xt.insert(xt.end(), xg.begin(), xg.end());
      const RepPoint pf = f.evaluate({0, xf}), pg = g.evaluate({0, xg}), pt = t.evaluate({0, xt});
      // A = rho_f(g_i), B = rho_g(h_j): the tensor family sends g_i h_j to A (x) B.
      const std::size_t i = static_cast<std::size_t>(sample) % f.group().generator_count();
      const std::size_t j = static_cast<std::size_t>(sample) % g.group().generator_count();
      const Matrix ab = pt.matrices[i] * pt.matrices[static_cast<std::size_t>(nf) + j];
      const Complex lhs = ab.trace();
      const Complex rhs = pf.matrices[i].trace() * pg.matrices[j].trace();
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  c.require(points >= 1000, "too few sample points");
  c.require(worst <= 1e-10, "trace identity error " + fmt(worst));
  if (c.out.ok) c.out.detail = "50 pairs exact, " + std::to_string(points) + " points, max trace error " + fmt(worst);
  return c.out;
}

// 4 ------------------------------------------------------------------------------------------
// Freely reduced words of length <= max_len.
std::vector<Word> all_words(std::size_t gens, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::vector<Word> frontier{Word{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (std::size_t g = 0; g < gens; ++g)
        for (bool inv : {false, true}) {
          if (!w.empty() && w.letters.back().generator == g && w.letters.back().inverse != inv) continue;
          Word v = w;
          v.letters.push_back({g, inv});
          next.push_back(v);
        }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

// Frobenius formula: chi_Ind(g) = sum over cosets t_j with t_j^-1 g t_j in H of chi(t_j^-1 g t_j).
double induction_error(const Family& base, const SubgroupCover& cover, int params, std::mt19937_64& rng) {
  const Family ind = induce_family(base, cover);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto words = all_words(cover.group().generator_count(), 4);
  double worst = 0.0;
  for (int s = 0; s < params; ++s) {
    std::vector<double> x(base.components()[0].dim());
    for (double& v : x) v = u(rng);
    const RepPoint pi = ind.evaluate({0, x}), pb = base.evaluate({0, x});
    for (const Word& w : words) {
      Complex expected = 0.0;
      for (const Word& t : cover.cosets()) {
        const auto coords = cover.subgroup_coordinates(t.inverse() * w * t);
        if (!coords) continue;
        Matrix h = Matrix::Identity(pb.dimension(), pb.dimension());
        for (std::size_t k = 0; k < coords->size(); ++k) {
          const long e = (*coords)[k];
          const Matrix& gen = pb.matrices[k];
          for (long r = 0; r < std::abs(e); ++r) h = h * (e > 0 ? gen : Matrix(gen.adjoint()));
        }
        expected += h.trace();
      }
      worst = std::max(worst, std::abs(evaluate_word(w, pi).trace() - expected));
    }
  }
  return worst;
}

Outcome induction_character() {
  Checker c;
  std::mt19937_64 rng(4);
  const double circle = induction_error(character_family_Zn(1, 32), circle_cover(2), 32, rng);
  const double klein = induction_error(character_family_Zn(2, 32), klein_cover(), 32, rng);
  c.require(circle <= 1e-8, "2Z <= Z error " + fmt(circle));
  c.require(klein <= 1e-8, "Z^2 <= Klein error " + fmt(klein));
  if (c.out.ok) c.out.detail = "max error 2Z<=Z " + fmt(circle) + ", Z^2<=Klein " + fmt(klein);
  return c.out;
}

// 5 ------------------------------------------------------------------------------------------
Outcome transfer_scaling() {
  Checker c;
  std::string summary;
  for (int k : {2, 3, 5}) {
    const auto t = transfer_scaling_check(character_family_Zn(1, 32), circle_cover(k));
    c.require(t.passed && t.index == static_cast<std::size_t>(k), "circle index " + std::to_string(k) + ": " + t.detail);
    summary += "circle(" + std::to_string(k) + ") ";
  }
  RationalMatrix m(2, 2);
  m(0, 0) = 2;
  m(1, 1) = 1;
  const auto t = transfer_scaling_check(character_family_Zn(2, 16), torus_cover(m));
  c.require(t.passed && t.index == 2, "torus index 2: " + t.detail);
  if (c.out.ok) c.out.detail = summary + "torus(diag(2,1)) all scale by the index";
  return c.out;
}

// 6 ------------------------------------------------------------------------------------------
Outcome free_group_detection() {
  Checker c;
  const auto d = GroupClassDescriptor::free(2);
  const auto circle = character_family_Zn(1, 16);
  const auto f = disjoint_union(extend_free_product(circle, d.presentation(), {"a1"}),
                                extend_free_product(circle, d.presentation(), {"a2"}));
  const auto r = detection_matrix(d, {f});
  c.require(r.verdict == Verdict::FdCertified, "verdict " + to_string(r.verdict));
  for (std::size_t i = 0; i < r.matrix.size(); ++i) {
    if (r.row_degrees[i] != 1) continue;
    const std::size_t own = r.row_labels[i] == "[a1]" ? 0 : 1;
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      if (r.columns[k].x_monomial == 0) continue;
      const Rational expected = r.columns[k].component == own ? 1 : 0;
      c.require(r.matrix[i][k] == expected, "unexpected entry at " + r.row_labels[i] + " / " + r.columns[k].label);
    }
  }
  if (c.out.ok) c.out.detail = "[a1], [a2] detected; cross terms exactly 0";
  return c.out;
}

// 7 ------------------------------------------------------------------------------------------
Outcome klein_detection() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = GroupClassDescriptor::finite_index_super(GroupClassDescriptor::free_abelian(2), 2, "klein",
                                                          klein_bottle_group(), HomologyTable{{1, 1}, {"b"}});
  const auto r = numeric_detection_matrix(d, {induce_family(character_family_Zn(2, 32), klein_cover())});
  const double elapsed = seconds_since(t0);
  Rational best = 0;
  for (std::size_t i = 0; i < r.matrix.size(); ++i)
    if (r.row_degrees[i] == 1)
      for (const auto& e : r.matrix[i])
        if (e && abs(*e) > abs(best)) best = *e;
  c.require(denominator(best) == 1 && abs(best) >= 1, "H_1 pairing is " + to_string(best));
  c.require(elapsed < 5.0, "took " + fmt(elapsed) + " s");
  if (c.out.ok) c.out.detail = "<[b], ch_1> = " + to_string(best) + ", " + fmt(elapsed) + " s";
  return c.out;
}

// 8 ------------------------------------------------------------------------------------------
Outcome winding_pairing() {
  Checker c;
  const int samples = 128;
  auto scalar = [&](int k, int s) { return std::polar(1.0, kTwoPi * k * s / samples); };
  for (int k = -3; k <= 3; ++k) {
    std::vector<Matrix> loop;
    for (int s = 0; s <= samples; ++s) loop.push_back(Matrix::Constant(1, 1, scalar(k, s)));
    c.require(winding_number(loop) == k, "e^{2 pi i k t} with k=" + std::to_string(k));
  }
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> wind(-3, 3), blocks(2, 3), size(1, 2);
  for (int trial = 0; trial < 100; ++trial) {
    // Each block is V diag(e^{2 pi i k_r t}) V* for a random unitary V.
    struct Block {
      Matrix v;
      std::vector<int> k;
    };
    std::vector<Block> parts;
    int total = 0, expected = 0;
    const int nb = blocks(rng);
    for (int b = 0; b < nb; ++b) {
      Block blk;
      const int m = size(rng);
      blk.v = haar_unitary(m, rng);
      for (int r = 0; r < m; ++r) blk.k.push_back(wind(rng));
      int w = 0;
      for (int v : blk.k) w += v;
      std::vector<Matrix> alone;
      for (int s = 0; s <= samples; ++s) {
        Matrix diag = Matrix::Zero(m, m);
        for (int r = 0; r < m; ++r) diag(r, r) = scalar(blk.k[r], s);
        alone.push_back(blk.v * diag * blk.v.adjoint());
      }
      expected += winding_number(alone);
      c.require(winding_number(alone) == w, "block winding");
      total += m;
      parts.push_back(std::move(blk));
    }
    std::vector<Matrix> sum;
    for (int s = 0; s <= samples; ++s) {
      Matrix m = Matrix::Zero(total, total);
      int off = 0;
      for (const Block& blk : parts) {
        const int sz = static_cast<int>(blk.k.size());
        Matrix diag = Matrix::Zero(sz, sz);
        for (int r = 0; r < sz; ++r) diag(r, r) = scalar(blk.k[r], s);
        m.block(off, off, sz, sz) = blk.v * diag * blk.v.adjoint();
        off += sz;
      }
      sum.push_back(m);
    }
    c.require(winding_number(sum) == expected, "additivity failed on trial " + std::to_string(trial));
  }
  if (c.out.ok) c.out.detail = "k = -3..3 exact; additive on 100 random block loops";
  return c.out;
}

// 9 ------------------------------------------------------------------------------------------
Outcome obstruction_arithmetic() {
  Checker c;
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long long> fr(2, 12), ir(2, 40);
  int excluded = 0;
  for (int i = 0; i < 20; ++i) {
    const long long f = i == 0 ? 2 : fr(rng), idx = i == 0 ? 10 : ir(rng);
    const long long g = idx * (f - 1) + 1;
    const auto r = bm_obstruction(f, idx);
    c.require(r.g == g, "g mismatch for f=" + std::to_string(f) + " index=" + std::to_string(idx));
    c.require(r.excluded == (g > 2 * f), "excluded flag for f=" + std::to_string(f));
    c.require(r.h2_lower_bound == std::max(0LL, g - 2 * f), "h2 bound for f=" + std::to_string(f));
    excluded += r.excluded;
  }
  if (c.out.ok) c.out.detail = "20 pairs match, " + std::to_string(excluded) + " excluded";
  return c.out;
}

// 10 -----------------------------------------------------------------------------------------
Outcome betti_inequality() {
  Checker c;
  for (int n = 1; n <= 4; ++n) {
    // prod_{i<=n} (1 + t^{2i-1}) expanded by repeated convolution, then evaluated at t = 1.
    std::vector<long> poly{1};
    for (int i = 1; i <= n; ++i) {
      std::vector<long> factor(2 * i, 0);
      factor[0] = 1;
      factor[2 * i - 1] = 1;
      std::vector<long> next(poly.size() + factor.size() - 1, 0);
      for (std::size_t a = 0; a < poly.size(); ++a)
        for (std::size_t b = 0; b < factor.size(); ++b) next[a + b] += poly[a] * factor[b];
      poly = std::move(next);
    }
    long at_one = 0;
    for (long v : poly) at_one += v;
    for (int m = 1; m <= 4; ++m) {
      const auto r = betti_inequality_check(m, n);
      long expected = 1;
      for (int k = 0; k < m; ++k) expected *= at_one;
      c.require(r.lhs == expected && r.lhs == Integer(1) << (n * m), "lhs for m=" + std::to_string(m) + " n=" + std::to_string(n));
      c.require(r.holds && r.lhs >= r.rhs, "inequality fails for m=" + std::to_string(m));
    }
  }
  if (c.out.ok) c.out.detail = "holds for 1 <= m, n <= 4 with lhs = 2^{nm}";
  return c.out;
}

// 11 -----------------------------------------------------------------------------------------
Outcome optimizer_soundness() {
  Checker c;
  const std::pair<const char*, GroupPresentation> groups[] = {
      {"Z^2", free_abelian_group(2)}, {"Klein", klein_bottle_group()}, {"genus 2", surface_group(2)}};
  double worst_time = 0.0, worst_defect = 0.0, worst_unitary = 0.0;
  for (const auto& [name, g] : groups)
    for (std::uint64_t seed = 101; seed < 106; ++seed) {
      SolveConfig cfg;
      cfg.seed = seed;
      cfg.tolerance = 1e-10;
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = solve_representation(g, 2, cfg);
      const double elapsed = seconds_since(t0);
      worst_time = std::max(worst_time, elapsed);
      worst_defect = std::max(worst_defect, relator_defect(r.point, g));
      worst_unitary = std::max(worst_unitary, r.worst_unitarity);
      const std::string tag = std::string(name) + " seed " + std::to_string(seed);
      c.require(r.converged && relator_defect(r.point, g) <= 1e-8, tag + " did not reach 1e-8");
      c.require(r.worst_unitarity <= kUnitarityTol, tag + " left U(2)");
      c.require(elapsed < 5.0, tag + " took " + fmt(elapsed) + " s");
    }
  if (c.out.ok)
    c.out.detail = "15 runs, max defect " + fmt(worst_defect) + ", max unitarity drift " + fmt(worst_unitary) +
                   ", slowest " + fmt(worst_time) + " s";
  return c.out;
}

// 12 -----------------------------------------------------------------------------------------
MultiForm random_form(std::mt19937_64& rng, LabelSpace s, int terms) {
  std::uniform_int_distribution<int> coeff(-4, 4), den(1, 3);
  std::uniform_int_distribution<std::uint32_t> base(0, (1u << s.base) - 1), param(0, (1u << s.param) - 1);
  MultiForm f(s);
  for (int t = 0; t < terms; ++t) f.add_term(make_monomial(base(rng), param(rng)), Rational(coeff(rng), den(rng)));
  return f;
}

Outcome slant_identities() {
  Checker c;
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dim(1, 3), entry(-2, 2), deg(0, 2);
  int instances = 0;
  while (instances < 200) {
    const int n = dim(rng), p = dim(rng);
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = entry(rng);
    if (m.determinant() == 0) continue;
    const auto cover = torus_cover(m);
    const LabelSpace s{n, p};
    const MultiForm ch = random_form(rng, s, 6);
    const auto basis = rational_homology(GroupClassDescriptor::free_abelian(n));
    const HomologyClass& cls = basis.classes[std::uniform_int_distribution<std::size_t>(0, basis.classes.size() - 1)(rng)];
    // Naturality: <pi^* ch, c> = <ch, pi_* c>.
    c.require(slant_contract(pullback_along_cover(ch, cover), cls) == slant_contract(ch, pushforward_class(cls, cover)),
              "naturality fails for " + ch.to_string() + " at " + cls.label);
    // Module property with a homogeneous parameter form on either side.
    const int q = std::min(deg(rng), p);
    MultiForm alpha(LabelSpace{0, p});
    for (std::uint32_t mono = 0; mono < (1u << p); ++mono)
      if (std::popcount(mono) == q) alpha.add_term(make_monomial(0, mono), entry(rng));
    const MultiForm lifted = alpha.embed(s, 0, 0);
    const MultiForm contracted = slant_contract(ch, cls);
    c.require(slant_contract(wedge(ch, lifted), cls) == wedge(contracted, alpha), "right module property");
    const Rational koszul = (q * cls.degree) % 2 ? -1 : 1;
    c.require(slant_contract(wedge(lifted, ch), cls) == wedge(alpha, contracted) * koszul, "left module property");
    ++instances;
  }
  if (c.out.ok) c.out.detail = std::to_string(instances) + " instances: naturality and both module identities exact";
  return c.out;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Poincare bundle curvature and Chern number", poincare_curvature},
      {"Z^n FD certificate, n = 1..4", zn_certificate},
      {"tensor multiplicativity", tensor_multiplicativity},
      {"induction character identity", induction_character},
      {"transfer scaling", transfer_scaling},
      {"free group detection", free_group_detection},
      {"Klein bottle detection", klein_detection},
      {"winding pairing", winding_pairing},
      {"obstruction arithmetic", obstruction_arithmetic},
      {"Betti inequality", betti_inequality},
      {"optimizer soundness", optimizer_soundness},
      {"slant identities", slant_identities},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::printf("%s %2d %s: %s\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed ? 1 : 0;
}
