#pragma once

#include <Eigen/Dense>

namespace foresee {

// First two moments of a state distribution. The covariance is symmetrized on
// construction; positive semidefiniteness is enforced where it matters, in
// matrix_sqrt.
struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  GaussianMoments() = default;
  GaussianMoments(Eigen::VectorXd m, const Eigen::MatrixXd& c)
      : mean(std::move(m)), cov(0.5 * (c + c.transpose())) {}

  int dim() const { return static_cast<int>(mean.size()); }
};

// Weighted particle representation of a state distribution. Points are stored
// column-wise.
struct SigmaSet {
  Eigen::MatrixXd points;   // n x N
  Eigen::VectorXd weights;  // N, sums to 1

  int dim() const { return static_cast<int>(points.rows()); }
  int size() const { return static_cast<int>(points.cols()); }

  // Throws std::invalid_argument on shape mismatch or a weight sum away from 1.
  void validate() const;
};

// Per-dimension standardized third and fourth central moments.
struct HigherMoments {
  Eigen::VectorXd skewness;
  Eigen::VectorXd kurtosis;
};

}  // namespace foresee
