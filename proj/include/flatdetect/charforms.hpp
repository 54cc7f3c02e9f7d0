#pragma once

#include "flatdetect/presentation.hpp"

#include <span>
#include <vector>

namespace flatdetect {

inline constexpr double kIntegralityTol = 1e-6;

// A connection d + A on a rank-k bundle over the d-torus [0,1)^d, sampled at the nodes of a
// uniform grid with `resolution` nodes per axis. `potential[a][node]` is the k x k
// coefficient A_a at that node (flat index, axis 0 fastest).
//
// Nontrivial bundles cannot have a periodic potential. Continuing A_a one node past the last
// layer of axis w gives the first-layer value plus `transition[w][a][node]`, where node is that
// first-layer node. This covers abelian (diagonal) transition functions, which is all the
// in-scope bundles need.
class GridConnection {
 public:
  GridConnection(int torus_dim, int resolution, Eigen::Index fiber_dim);

  int torus_dim() const noexcept { return dim_; }
  int resolution() const noexcept { return res_; }
  Eigen::Index fiber_dim() const noexcept { return k_; }
  double spacing() const noexcept { return 1.0 / res_; }
  std::size_t node_count() const noexcept { return nodes_; }

  std::size_t node_index(std::span<const int> coords) const;
  std::vector<int> node_coords(std::size_t index) const;

  Matrix& potential(int axis, std::size_t node) { return potential_.at(axis).at(node); }
  const Matrix& potential(int axis, std::size_t node) const { return potential_.at(axis).at(node); }
  Matrix& transition(int wrap_axis, int axis, std::size_t node) { return transition_.at(wrap_axis).at(axis).at(node); }
  const Matrix& transition(int wrap_axis, int axis, std::size_t node) const {
    return transition_.at(wrap_axis).at(axis).at(node);
  }

  // A_axis at integer coordinates that may step one node past the last layer on any axis;
  // the transition shifts are applied for each wrapped axis.
  Matrix potential_at(int axis, std::vector<int> coords) const;

 private:
  int dim_;
  int res_;
  Eigen::Index k_;
  std::size_t nodes_;
  std::vector<std::vector<Matrix>> potential_;
  std::vector<std::vector<std::vector<Matrix>>> transition_;
};

// Rank-1 connection on the 2-torus with axis 0 = z and axis 1 = x: A_z = 0, A_x = -2 pi i z,
// with the transition A_x -> A_x - 2 pi i across the z boundary.
GridConnection poincare_connection(int resolution);

// Curvature component F_ab = d_a A_b - d_b A_a + [A_a, A_b] at the centre of every plaquette
// of the coordinate 2-torus spanned by axes (a, b) through the origin, in oriented order:
// result[i + resolution * j] is the plaquette with lower corner i along a and j along b.
// Derivatives are centred differences at the plaquette centre.
std::vector<Matrix> numerical_curvature(const GridConnection& c, int axis_a, int axis_b);

struct ChernNumber {
  long value = 0;
  double residual = 0.0;  // |raw - value|
  double raw = 0.0;       // (i / 2 pi) * sum of tr F over plaquettes times cell area
  bool integral = true;   // residual <= kIntegralityTol
};

// First Chern number over the oriented coordinate 2-torus (a, b), convention c1 = (i/2pi) tr F,
// midpoint rule over plaquettes.
ChernNumber chern_number(const GridConnection& c, int axis_a, int axis_b);

// Blockwise direct sum of two connections on the same grid.
GridConnection direct_sum(const GridConnection& a, const GridConnection& b);

// Complex conjugate connection (the dual line bundle for k = 1).
GridConnection conjugate(const GridConnection& c);

// Line bundle over the 2-torus (axis 0 = z, axis 1 = x) whose holonomy around z at parameter x
// is h(x), sampled at x = j / n for j = 0..n-1: A_z = 0, A_x = -2 pi i z w'(x) where w is a
// continuous lift of arg(h) / 2pi. Its first Chern number over (z, x) is the winding of h.
// Throws InvalidInput when h vanishes or adjacent samples differ in argument by pi or more.
GridConnection holonomy_line_connection(std::span<const Complex> holonomy);

// Winding number of det along a closed sampled loop of invertible matrices (first sample
// equals the last to within 1e-9). t -> e^{2 pi i t} winds +1. Throws InvalidInput for open
// or degenerate loops and for under-sampled loops (an adjacent jump in arg det >= pi).
int winding_number(std::span<const Matrix> loop);

}  // namespace flatdetect
