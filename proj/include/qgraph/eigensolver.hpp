#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <vector>

namespace qgraph {

using SparseMatrix = Eigen::SparseMatrix<double>;

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  [[nodiscard]] double residual() const { return residual_; }

 private:
  double residual_;
};

struct EigenOptions {
  int max_iterations = 10000;
  /// Normwise backward error ||Kx - t Mx|| / ((||K|| + |t| ||M||) ||x||).
  double tolerance = 1e-10;
  /// Must lie below the lowest eigenvalue; K - shift M is factorized once.
  double shift = -1e-3;
  /// Every few iterations move the shift up toward the lowest Ritz value,
  /// keeping it below the spectrum (checked through the LDL^T inertia).
  bool adaptive_shift = true;
};

struct EigenResult {
  std::vector<double> values;  // nondecreasing
  Eigen::MatrixXd vectors;     // M-orthonormal columns
  std::vector<double> ritz_values;  // whole search block, nondecreasing
  double residual = 0.0;       // largest backward error among returned pairs
  int iterations = 0;
  bool converged = false;
};

/// Lowest `count` eigenpairs of K x = t M x (K symmetric positive
/// semidefinite, M symmetric positive definite) by block inverse iteration
/// with Rayleigh-Ritz projection. Deterministic start block whose first
/// column is all ones.
[[nodiscard]] EigenResult lowest_eigenpairs(const SparseMatrix& stiffness, const SparseMatrix& mass, int count,
                                            const EigenOptions& options = {});

}  // namespace qgraph
