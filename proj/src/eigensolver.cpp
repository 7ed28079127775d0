#include "qgraph/eigensolver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace qgraph {

namespace {

double row_sum_norm(const SparseMatrix& a) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) sums[it.row()] += std::abs(it.value());
  return sums.size() ? sums.maxCoeff() : 0.0;
}

Eigen::MatrixXd start_block(Eigen::Index n, Eigen::Index p) {
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      x(i, j) = j == 0 ? 1.0
                       : std::cos(std::numbers::pi * static_cast<double>(j) * (static_cast<double>(i) + 0.5) /
                                  static_cast<double>(n)) +
                             1e-3 * std::sin(0.7 * static_cast<double>((i + 1) * (j + 1)));
  return x;
}

double backward_error(const SparseMatrix& k, const SparseMatrix& m, const Eigen::VectorXd& x, double t,
                      double norm_k, double norm_m) {
  const Eigen::VectorXd r = k * x - t * (m * x);
  const double scale = (norm_k + std::abs(t) * norm_m) * x.norm();
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

EigenResult dense_solve(const SparseMatrix& k, const SparseMatrix& m, int count) {
  const Eigen::MatrixXd kd(k);
  const Eigen::MatrixXd md(m);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kd, md);
  EigenResult out;
  out.converged = es.info() == Eigen::Success;
  out.iterations = 1;
  for (int j = 0; j < count; ++j) out.values.push_back(es.eigenvalues()[j]);
  const auto& all = es.eigenvalues();
  out.ritz_values.assign(all.data(), all.data() + std::min<Eigen::Index>(all.size(), 2 * count + 3));
  out.vectors = es.eigenvectors().leftCols(count);
  const double nk = row_sum_norm(k);
  const double nm = row_sum_norm(m);
  for (int j = 0; j < count; ++j)
    out.residual = std::max(out.residual, backward_error(k, m, out.vectors.col(j), out.values[static_cast<std::size_t>(j)], nk, nm));
  return out;
}

}  // namespace

EigenResult lowest_eigenpairs(const SparseMatrix& stiffness, const SparseMatrix& mass, int count,
                              const EigenOptions& options) {
  const Eigen::Index n = stiffness.rows();
  if (count < 1 || count > n) throw std::invalid_argument("eigenpair count out of range");
  const Eigen::Index p = std::min<Eigen::Index>(n, count + std::max(3, count));
  if (n <= 2 * p) return dense_solve(stiffness, mass, count);

  double shift = options.shift;
  Eigen::SimplicialLDLT<SparseMatrix> factor(stiffness - shift * mass);
  if (factor.info() != Eigen::Success) throw ConvergenceError("factorization of shifted operator failed", INFINITY);

  const double norm_k = row_sum_norm(stiffness);
  const double norm_m = row_sum_norm(mass);

  EigenResult out;
  Eigen::MatrixXd x = start_block(n, p);
  Eigen::VectorXd ritz;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::MatrixXd y = factor.solve(mass * x);
    for (Eigen::Index j = 0; j < p; ++j) {
      const double nrm = y.col(j).norm();
      if (nrm > 0.0) y.col(j) /= nrm;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    const Eigen::MatrixXd kq = q.transpose() * (stiffness * q);
    const Eigen::MatrixXd mq = q.transpose() * (mass * q);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (kq + kq.transpose()),
                                                                   0.5 * (mq + mq.transpose()));
    ritz = rr.eigenvalues();
    x = q * rr.eigenvectors();

    double worst = 0.0;
    for (int j = 0; j < count; ++j) worst = std::max(worst, backward_error(stiffness, mass, x.col(j), ritz[j], norm_k, norm_m));
    out.residual = worst;
    out.iterations = it;
    if (worst <= options.tolerance) {
      out.converged = true;
      break;
    }
    if (options.adaptive_shift && it % 3 == 0) {
      const double gap = ritz[count] - ritz[0];
      const double proposal = ritz[0] - std::max(0.5 * gap, 1e-8 * std::max(1.0, std::abs(ritz[0])));
      if (ritz[0] - proposal < 0.5 * (ritz[0] - shift)) {
        Eigen::SimplicialLDLT<SparseMatrix> trial(stiffness - proposal * mass);
        if (trial.info() == Eigen::Success && (trial.vectorD().array() > 0.0).all()) {
          factor.compute(stiffness - proposal * mass);
          shift = proposal;
        }
      }
    }
  }
  for (int j = 0; j < count; ++j) out.values.push_back(ritz[j]);
  out.ritz_values.assign(ritz.data(), ritz.data() + ritz.size());
  out.vectors = x.leftCols(count);
  return out;
}

}  // namespace qgraph
