#include "flatdetect/repvar.hpp"

#include "flatdetect/error.hpp"

#include <algorithm>
#include <cmath>

namespace flatdetect {

double unitarity_deviation(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

double unitarity_deviation(const RepPoint& p) {
  double worst = 0.0;
  for (const Matrix& m : p.matrices) worst = std::max(worst, unitarity_deviation(m));
  return worst;
}

namespace {

void check_point(const RepPoint& p, const GroupPresentation& g) {
  if (p.matrices.size() != g.generator_count())
    throw InvalidInput("point assigns " + std::to_string(p.matrices.size()) + " matrices to a group with " +
                       std::to_string(g.generator_count()) + " generators");
  for (const Matrix& m : p.matrices)
    if (m.rows() != m.cols() || m.rows() != p.dimension()) throw InvalidInput("dimension mismatch among assigned matrices");
}

}  // namespace

double relator_defect(const RepPoint& p, const GroupPresentation& g) {
  check_point(p, g);
  const Eigen::Index n = p.dimension();
  double total = 0.0;
  for (const Word& r : g.relators()) total += (evaluate_word(r, p) - Matrix::Identity(n, n)).squaredNorm();
  return total;
}

bool verify_homomorphism(const RepPoint& p, const GroupPresentation& g, double tol) {
  if (p.matrices.size() != g.generator_count()) return false;
  try {
    return relator_defect(p, g) <= tol && unitarity_deviation(p) <= tol;
  } catch (const InvalidInput&) {
    return false;
  }
}

Matrix haar_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return polar_retract(q);
}

Matrix polar_retract(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

namespace {

// Riemannian gradient of the defect, one skew-Hermitian matrix per generator, in the
// right-trivialized tangent space (dU = U * Omega).
std::vector<Matrix> defect_gradient(const RepPoint& p, const GroupPresentation& g) {
  const Eigen::Index n = p.dimension();
  std::vector<Matrix> euclid(g.generator_count(), Matrix::Zero(n, n));
  for (const Word& r : g.relators()) {
    const std::size_t k = r.size();
    std::vector<Matrix> factors;
    factors.reserve(k);
    for (const Letter& l : r.letters) {
      const Matrix& u = p.matrices[l.generator];
      factors.push_back(l.inverse ? Matrix(u.adjoint()) : u);
    }
    std::vector<Matrix> prefix(k + 1, Matrix::Identity(n, n));
    for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * factors[i];
    std::vector<Matrix> suffix(k + 1, Matrix::Identity(n, n));
    for (std::size_t i = k; i-- > 0;) suffix[i] = factors[i] * suffix[i + 1];
    const Matrix residual = prefix[k] - Matrix::Identity(n, n);
    for (std::size_t i = 0; i < k; ++i) {
      const Matrix e = 2.0 * prefix[i].adjoint() * residual * suffix[i + 1].adjoint();
      const Letter& l = r.letters[i];
      if (l.inverse) {
        euclid[l.generator] += e.adjoint();
      } else {
        euclid[l.generator] += e;
      }
    }
  }
  std::vector<Matrix> omega;
  omega.reserve(euclid.size());
  for (std::size_t i = 0; i < euclid.size(); ++i) {
    const Matrix x = p.matrices[i].adjoint() * euclid[i];
    omega.push_back(0.5 * (x - x.adjoint()));
  }
  return omega;
}

}  // namespace

SolveResult solve_representation(const GroupPresentation& g, int n, const SolveConfig& cfg) {
  if (n < 1) throw InvalidInput("representation dimension must be at least 1");
  if (!(cfg.tolerance > 0.0)) throw InvalidInput("solver tolerance must be positive");
  if (cfg.max_iter < 0) throw InvalidInput("max_iter must be nonnegative");

  std::mt19937_64 rng(cfg.seed);
  SolveResult result;
  result.point.matrices.reserve(g.generator_count());
  for (std::size_t i = 0; i < g.generator_count(); ++i) result.point.matrices.push_back(haar_unitary(n, rng));

  double defect = relator_defect(result.point, g);
  result.defect_trace.push_back(defect);
  result.worst_unitarity = unitarity_deviation(result.point);

  int iter = 0;
  while (defect > cfg.tolerance && iter < cfg.max_iter) {
    const std::vector<Matrix> omega = defect_gradient(result.point, g);
    double slope = 0.0;
    for (const Matrix& w : omega) slope += w.squaredNorm();
    if (slope == 0.0) break;

    bool accepted = false;
    double step = 1.0;
    for (int h = 0; h <= cfg.max_halvings; ++h, step *= 0.5) {
      RepPoint trial;
      trial.matrices.reserve(omega.size());
      for (std::size_t i = 0; i < omega.size(); ++i) {
        const Matrix& u = result.point.matrices[i];
        trial.matrices.push_back(polar_retract(u - step * (u * omega[i])));
      }
      const double trial_defect = relator_defect(trial, g);
      if (trial_defect <= defect - cfg.armijo * step * slope) {
        result.point = std::move(trial);
        defect = trial_defect;
        accepted = true;
        break;
      }
    }
    ++iter;
    if (!accepted) break;
    result.defect_trace.push_back(defect);
    result.worst_unitarity = std::max(result.worst_unitarity, unitarity_deviation(result.point));
  }

  result.defect = defect;
  result.iterations = iter;
  result.converged = defect <= cfg.tolerance && unitarity_deviation(result.point) <= kUnitarityTol;
  return result;
}

}  // namespace flatdetect
