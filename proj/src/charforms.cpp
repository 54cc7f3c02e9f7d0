#include "flatdetect/charforms.hpp"

#include "flatdetect/error.hpp"

#include <cmath>
#include <numbers>

namespace flatdetect {

namespace {
constexpr Complex kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

GridConnection::GridConnection(int torus_dim, int resolution, Eigen::Index fiber_dim)
    : dim_(torus_dim), res_(resolution), k_(fiber_dim), nodes_(1) {
  if (torus_dim < 1) throw InvalidInput("grid connection needs at least one axis");
  if (resolution < 2) throw InvalidInput("grid resolution must be at least 2");
  if (fiber_dim < 1) throw InvalidInput("fiber dimension must be at least 1");
  for (int i = 0; i < dim_; ++i) nodes_ *= static_cast<std::size_t>(res_);
  const Matrix zero = Matrix::Zero(k_, k_);
  potential_.assign(dim_, std::vector<Matrix>(nodes_, zero));
  transition_.assign(dim_, std::vector<std::vector<Matrix>>(dim_, std::vector<Matrix>(nodes_, zero)));
}

std::size_t GridConnection::node_index(std::span<const int> coords) const {
  if (coords.size() != static_cast<std::size_t>(dim_)) throw InvalidInput("node coordinate arity mismatch");
  std::size_t idx = 0;
  for (int a = dim_ - 1; a >= 0; --a) {
    const int c = ((coords[a] % res_) + res_) % res_;
    idx = idx * static_cast<std::size_t>(res_) + static_cast<std::size_t>(c);
  }
  return idx;
}

std::vector<int> GridConnection::node_coords(std::size_t index) const {
  std::vector<int> out(dim_);
  for (int a = 0; a < dim_; ++a) {
    out[a] = static_cast<int>(index % static_cast<std::size_t>(res_));
    index /= static_cast<std::size_t>(res_);
  }
  return out;
}

Matrix GridConnection::potential_at(int axis, std::vector<int> coords) const {
  for (int w = 0; w < dim_; ++w) {
    if (coords[w] == res_) {
      coords[w] = 0;
      const Matrix shift = transition(w, axis, node_index(coords));
      return potential_at(axis, coords) + shift;
    }
    if (coords[w] < 0 || coords[w] > res_) throw InvalidInput("node coordinate outside the extended grid");
  }
  return potential(axis, node_index(coords));
}

GridConnection poincare_connection(int resolution) {
  GridConnection c(2, resolution, 1);
  const double h = c.spacing();
  for (std::size_t n = 0; n < c.node_count(); ++n) {
    const double z = c.node_coords(n)[0] * h;
    c.potential(1, n)(0, 0) = -kTwoPi * kI * z;
    c.transition(0, 1, n)(0, 0) = -kTwoPi * kI;
  }
  return c;
}

std::vector<Matrix> numerical_curvature(const GridConnection& c, int axis_a, int axis_b) {
  if (axis_a == axis_b) throw InvalidInput("curvature needs two distinct axes");
  if (axis_a < 0 || axis_b < 0 || axis_a >= c.torus_dim() || axis_b >= c.torus_dim())
    throw InvalidInput("curvature axis out of range");
  const int n = c.resolution();
  const double h = c.spacing();
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  std::vector<int> at(c.torus_dim(), 0);
  auto value = [&](int axis, int i, int j) {
    at[axis_a] = i;
    at[axis_b] = j;
    return c.potential_at(axis, at);
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Matrix a00 = value(axis_a, i, j), a10 = value(axis_a, i + 1, j);
      const Matrix a01 = value(axis_a, i, j + 1), a11 = value(axis_a, i + 1, j + 1);
      const Matrix b00 = value(axis_b, i, j), b10 = value(axis_b, i + 1, j);
      const Matrix b01 = value(axis_b, i, j + 1), b11 = value(axis_b, i + 1, j + 1);
      const Matrix da_b = ((b10 + b11) - (b00 + b01)) / (2.0 * h);
      const Matrix db_a = ((a01 + a11) - (a00 + a10)) / (2.0 * h);
      const Matrix a_mid = 0.25 * (a00 + a10 + a01 + a11);
      const Matrix b_mid = 0.25 * (b00 + b10 + b01 + b11);
      out.push_back(da_b - db_a + a_mid * b_mid - b_mid * a_mid);
    }
  return out;
}

ChernNumber chern_number(const GridConnection& c, int axis_a, int axis_b) {
  const std::vector<Matrix> curvature = numerical_curvature(c, axis_a, axis_b);
  const double area = c.spacing() * c.spacing();
  Complex total{0.0, 0.0};
  for (const Matrix& f : curvature) total += f.trace() * area;
  ChernNumber out;
  out.raw = (kI / kTwoPi * total).real();
  out.value = std::lround(out.raw);
  out.residual = std::abs(out.raw - static_cast<double>(out.value));
  out.integral = out.residual <= kIntegralityTol;
  return out;
}

GridConnection direct_sum(const GridConnection& a, const GridConnection& b) {
  if (a.torus_dim() != b.torus_dim() || a.resolution() != b.resolution())
    throw InvalidInput("direct sum of connections on different grids");
  const Eigen::Index ka = a.fiber_dim();
  const Eigen::Index kb = b.fiber_dim();
  GridConnection out(a.torus_dim(), a.resolution(), ka + kb);
  for (int axis = 0; axis < a.torus_dim(); ++axis)
    for (std::size_t n = 0; n < a.node_count(); ++n) {
      out.potential(axis, n).topLeftCorner(ka, ka) = a.potential(axis, n);
      out.potential(axis, n).bottomRightCorner(kb, kb) = b.potential(axis, n);
      for (int w = 0; w < a.torus_dim(); ++w) {
        out.transition(w, axis, n).topLeftCorner(ka, ka) = a.transition(w, axis, n);
        out.transition(w, axis, n).bottomRightCorner(kb, kb) = b.transition(w, axis, n);
      }
    }
  return out;
}

GridConnection conjugate(const GridConnection& c) {
  GridConnection out = c;
  for (int axis = 0; axis < c.torus_dim(); ++axis)
    for (std::size_t n = 0; n < c.node_count(); ++n) {
      out.potential(axis, n) = c.potential(axis, n).conjugate();
      for (int w = 0; w < c.torus_dim(); ++w) out.transition(w, axis, n) = c.transition(w, axis, n).conjugate();
    }
  return out;
}

namespace {

// Argument of b / a in (-pi, pi]; throws when the step is too coarse to be unambiguous.
double phase_step(Complex a, Complex b) {
  const double step = std::arg(b / a);
  if (std::abs(step) >= std::numbers::pi * (1.0 - 1e-12))
    throw InvalidInput("under-sampled loop: adjacent argument jump reaches pi");
  return step;
}

}  // namespace

GridConnection holonomy_line_connection(std::span<const Complex> holonomy) {
  const int n = static_cast<int>(holonomy.size());
  if (n < 2) throw InvalidInput("holonomy loop needs at least two samples");
  for (const Complex& h : holonomy)
    if (std::abs(h) < 1e-14) throw InvalidInput("holonomy vanishes; the loop is not invertible");

  // Continuous lift of arg(h) / 2pi, extended one sample each way across the wrap.
  std::vector<double> lift(n + 1);
  lift[0] = std::arg(holonomy[0]) / kTwoPi;
  for (int j = 0; j < n; ++j) lift[j + 1] = lift[j] + phase_step(holonomy[j], holonomy[(j + 1) % n]) / kTwoPi;
  const double winding = std::round(lift[n] - lift[0]);

  GridConnection c(2, n, 1);
  const double h = c.spacing();
  std::vector<double> derivative(n);
  for (int j = 0; j < n; ++j) {
    const double ahead = lift[j + 1];
    const double behind = (j == 0) ? lift[n - 1] - winding : lift[j - 1];
    derivative[j] = (ahead - behind) / (2.0 * h);
  }
  for (std::size_t node = 0; node < c.node_count(); ++node) {
    const std::vector<int> xy = c.node_coords(node);
    const double z = xy[0] * h;
    c.potential(1, node)(0, 0) = -kTwoPi * kI * z * derivative[xy[1]];
    c.transition(0, 1, node)(0, 0) = -kTwoPi * kI * derivative[xy[1]];
  }
  return c;
}

int winding_number(std::span<const Matrix> loop) {
  if (loop.size() < 2) throw InvalidInput("loop needs at least two samples");
  if ((loop.front() - loop.back()).norm() > 1e-9) throw InvalidInput("loop is not closed (first sample differs from last)");
  std::vector<Complex> dets;
  dets.reserve(loop.size());
  for (const Matrix& m : loop) {
    if (m.rows() != m.cols() || m.rows() != loop.front().rows()) throw InvalidInput("loop samples have mismatched dimensions");
    const Complex d = m.determinant();
    if (std::abs(d) < 1e-14) throw InvalidInput("loop passes through a singular matrix");
    dets.push_back(d);
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < dets.size(); ++i) total += phase_step(dets[i], dets[i + 1]);
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace flatdetect
