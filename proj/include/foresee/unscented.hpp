#pragma once

#include "foresee/types.hpp"

namespace foresee {

// 2n+1 sigma points whose sample mean and covariance reproduce m exactly:
// S_0 = mean with weight k/(n+k), S_i = mean +/- column i of sqrt((n+k) cov)
// with weights 1/(2(n+k)). k must be positive; 1 is the default throughout.
SigmaSet generate_ut_points(const GaussianMoments& m, double k = 1.0);

// Weighted sample mean of the set.
Eigen::VectorXd sample_mean(const SigmaSet& s);

// Weighted sample covariance about the sample mean. Symmetric PSD up to
// roundoff; invariant under permutation of (point, weight) pairs.
Eigen::MatrixXd sample_cov(const SigmaSet& s);

// Both first moments in one pass.
GaussianMoments sample_moments(const SigmaSet& s);

// Per-dimension standardized skewness and kurtosis. Throws
// DegenerateVarianceError when any dimension's variance is at or below 1e-12.
HigherMoments sample_higher_moments(const SigmaSet& s);

}  // namespace foresee
