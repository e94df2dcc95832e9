#include "foresee/linalg.hpp"

#include <cmath>
#include <limits>

#include "foresee/errors.hpp"

namespace foresee {

namespace {

// Cholesky that tolerates semidefinite pivots by zeroing their columns.
// Returns false when a pivot is negative beyond the zero tolerance.
bool semidefinite_cholesky(const Eigen::MatrixXd& a, Eigen::MatrixXd& l) {
  const int n = static_cast<int>(a.rows());
  const double max_diag = a.diagonal().cwiseAbs().maxCoeff();
  const double zero_tol = 8.0 * n * std::numeric_limits<double>::epsilon() * max_diag;
  l.setZero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= zero_tol) {
      if (d < -zero_tol) return false;
      // Dependent direction: leave the column zero.
      continue;
    }
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

}  // namespace

Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& cov) {
  const int n = static_cast<int>(cov.rows());
  if (cov.cols() != n) throw std::invalid_argument("matrix_sqrt: matrix must be square");
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  const double scale = sym.size() > 0 ? sym.cwiseAbs().maxCoeff() : 0.0;
  const double recon_tol = 1e-8 * (1.0 + scale);

  Eigen::MatrixXd l;
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd shifted = sym;
    if (jitter > 0.0) shifted.diagonal().array() += jitter;
    if (semidefinite_cholesky(shifted, l)) {
      const double err = (l * l.transpose() - sym).cwiseAbs().maxCoeff();
      if (err <= recon_tol) return l;
    }
    jitter = (jitter == 0.0) ? 1e-12 : jitter * 10.0;
    if (jitter > 1e-6) {
      throw NotPsdError("matrix_sqrt: covariance is not positive semidefinite");
    }
  }
}

}  // namespace foresee
