#pragma once

#include "flatdetect/presentation.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace flatdetect {

// Iterates and returned points stay within this distance of U(n): ||U*U - I||_F.
inline constexpr double kUnitarityTol = 1e-9;

double unitarity_deviation(const Matrix& u);
// Largest unitarity_deviation over the point's matrices.
double unitarity_deviation(const RepPoint& p);

// Sum over relators r of ||p(r) - I||_F^2. Zero iff every relator maps to the identity.
double relator_defect(const RepPoint& p, const GroupPresentation& g);

// True iff relator_defect <= tol and every matrix is unitary to within tol.
bool verify_homomorphism(const RepPoint& p, const GroupPresentation& g, double tol);

struct SolveConfig {
  double tolerance = 1e-10;
  int max_iter = 20000;
  // Armijo sufficient-decrease constant and the cap on step halvings per iteration.
  double armijo = 1e-4;
  int max_halvings = 50;
  std::uint64_t seed = 0;
};

struct SolveResult {
  RepPoint point;
  double defect = 0.0;
  int iterations = 0;
  bool converged = false;
  // Defect after each accepted step, starting with the initial point.
  std::vector<double> defect_trace;
  // Worst unitarity deviation seen over every iterate.
  double worst_unitarity = 0.0;
};

// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R's
// diagonal absorbed into Q.
Matrix haar_unitary(Eigen::Index n, std::mt19937_64& rng);

// Closest unitary in Frobenius norm (U V* from the SVD).
Matrix polar_retract(const Matrix& a);

// Riemannian gradient descent on U(n)^m for the relator defect: the Euclidean gradient is
// pulled back to the skew-Hermitian tangent space, steps use Armijo backtracking that halves
// from 1, and iterates are retracted to U(n) by the polar decomposition. Deterministic in the
// seed. Never throws on non-convergence; check `converged`.
SolveResult solve_representation(const GroupPresentation& g, int n, const SolveConfig& cfg);

}  // namespace flatdetect
