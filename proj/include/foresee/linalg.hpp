#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace foresee {

// Lower-triangular L with L * L^T = cov for a symmetric positive semidefinite
// matrix. Rank-deficient inputs are handled by zeroing the dependent columns,
// so cov = 0 yields L = 0 exactly. If the factorization cannot reconstruct
// cov, a jitter lambda*I is added, lambda escalating from 1e-12 by factors of
// 10 up to 1e-6, after which NotPsdError is thrown.
Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& cov);

// Kahan-Babuska-Neumaier compensated accumulators; weighted moment sums over
// tens of thousands of terms have to hold 1e-9 absolute error while entries
// span several orders of magnitude.
class KahanVectorSum {
 public:
  explicit KahanVectorSum(int n)
      : sum_(Eigen::VectorXd::Zero(n)), comp_(Eigen::VectorXd::Zero(n)) {}

  void add(const Eigen::VectorXd& v) {
    for (int i = 0; i < sum_.size(); ++i) add_scalar(sum_[i], comp_[i], v[i]);
  }
  Eigen::VectorXd value() const { return sum_ + comp_; }

  static void add_scalar(double& sum, double& comp, double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }

 private:
  Eigen::VectorXd sum_, comp_;
};

class KahanMatrixSum {
 public:
  KahanMatrixSum(int rows, int cols)
      : sum_(Eigen::MatrixXd::Zero(rows, cols)), comp_(Eigen::MatrixXd::Zero(rows, cols)) {}

  void add(const Eigen::MatrixXd& m) {
    for (int j = 0; j < sum_.cols(); ++j)
      for (int i = 0; i < sum_.rows(); ++i)
        KahanVectorSum::add_scalar(sum_(i, j), comp_(i, j), m(i, j));
  }
  Eigen::MatrixXd value() const { return sum_ + comp_; }

 private:
  Eigen::MatrixXd sum_, comp_;
};

}  // namespace foresee
