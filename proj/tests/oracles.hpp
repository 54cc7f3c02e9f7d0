#pragma once

// Independent reference computations used by the tests. Nothing here calls into the library
// code it checks.

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Exterior monomials as sorted label lists; base label i is i, parameter label j is 1000 + j.
using Labels = std::vector<int>;

// Sign of sorting `seq` by adjacent swaps (bubble sort); 0 when a label repeats.
inline int sort_sign(Labels& seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = 0; j + 1 < seq.size() - i; ++j)
      if (seq[j] > seq[j + 1]) {
        std::swap(seq[j], seq[j + 1]);
        sign = -sign;
      }
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (seq[i] == seq[i + 1]) return 0;
  return sign;
}

// Exterior algebra element with integer coefficients.
using Form = std::map<Labels, long>;

inline Form wedge(const Form& a, const Form& b) {
  Form out;
  for (const auto& [la, ca] : a)
    for (const auto& [lb, cb] : b) {
      Labels seq = la;
      seq.insert(seq.end(), lb.begin(), lb.end());
      const int s = sort_sign(seq);
      if (s == 0) continue;
      out[seq] += s * ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// Coefficient of z_S x_S in prod_{j in S} (z_j x_j), with S = {j_1 < ... < j_k}.
inline int character_sign(const std::vector<int>& subset) {
  Labels seq;
  for (int j : subset) {
    seq.push_back(j);
    seq.push_back(1000 + j);
  }
  return sort_sign(seq);
}

// Rank over Q of a small integer matrix by fraction-free elimination.
inline std::size_t rank(std::vector<std::vector<long>> m) {
  std::size_t r = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const long a = m[r][c], b = m[i][c];
      for (std::size_t k = 0; k < cols; ++k) m[i][k] = m[i][k] * a - m[r][k] * b;
      long g = 0;
      for (long v : m[i]) g = std::gcd(g, v);
      if (g > 1)
        for (long& v : m[i]) v /= g;
    }
    ++r;
  }
  return r;
}

// Betti numbers (b0, b1, b2) of the presentation 2-complex: one vertex, one edge per
// generator, one 2-cell per relator, d2 = abelianized relator exponent sums.
struct Relator {
  std::vector<std::pair<int, int>> letters;  // (generator, +1 / -1)
};
inline std::vector<long> presentation_complex_betti(int gens, const std::vector<Relator>& rels) {
  std::vector<std::vector<long>> d2(rels.size(), std::vector<long>(gens, 0));
  for (std::size_t r = 0; r < rels.size(); ++r)
    for (const auto& [g, e] : rels[r].letters) d2[r][g] += e;
  const long rk = static_cast<long>(rank(d2));
  return {1, gens - rk, static_cast<long>(rels.size()) - rk};
}

// Simplicial Betti numbers of the n x n triangulated torus (n >= 3).
inline std::vector<long> torus_simplicial_betti(int n) {
  auto vid = [n](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
  std::map<std::pair<int, int>, int> edge_id;
  std::vector<std::pair<int, int>> edges;
  auto edge = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = edge_id.find(key);
    if (it != edge_id.end()) return it->second;
    edges.push_back(key);
    return edge_id[key] = static_cast<int>(edges.size()) - 1;
  };
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      std::array<int, 3> t1{a, b, c}, t2{a, c, d};
      std::sort(t1.begin(), t1.end());
      std::sort(t2.begin(), t2.end());
      tris.push_back(t1);
      tris.push_back(t2);
      edge(a, b);
      edge(b, c);
      edge(a, c);
      edge(c, d);
      edge(a, d);
    }
  const int v = n * n;
  std::vector<std::vector<long>> d1(edges.size(), std::vector<long>(v, 0));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    d1[e][edges[e].first] -= 1;
    d1[e][edges[e].second] += 1;
  }
  std::vector<std::vector<long>> d2(tris.size(), std::vector<long>(edges.size(), 0));
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& [a, b, c] = tris[t];
    d2[t][edge(b, c)] += 1;
    d2[t][edge(a, c)] -= 1;
    d2[t][edge(a, b)] += 1;
  }
  const long r1 = static_cast<long>(rank(d1));
  const long r2 = static_cast<long>(rank(d2));
  return {v - r1, static_cast<long>(edges.size()) - r1 - r2, static_cast<long>(tris.size()) - r2};
}

}  // namespace oracle
