#include "foresee/unscented.hpp"

#include <cmath>
#include <stdexcept>

#include "foresee/errors.hpp"
#include "foresee/linalg.hpp"

namespace foresee {

void SigmaSet::validate() const {
  if (points.cols() != weights.size() || points.cols() < 1) {
    throw std::invalid_argument("SigmaSet: points and weights must have equal length >= 1");
  }
  double sum = 0.0, comp = 0.0;
  for (int i = 0; i < weights.size(); ++i) KahanVectorSum::add_scalar(sum, comp, weights[i]);
  if (std::abs(sum + comp - 1.0) > 1e-12) {
    throw std::invalid_argument("SigmaSet: weights must sum to 1");
  }
}

SigmaSet generate_ut_points(const GaussianMoments& m, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("generate_ut_points: k must be positive");
  const int n = m.dim();
  if (m.cov.rows() != n || m.cov.cols() != n) {
    throw std::invalid_argument("generate_ut_points: covariance shape mismatch");
  }
  const Eigen::MatrixXd root = std::sqrt(n + k) * matrix_sqrt(m.cov);

  SigmaSet s;
  s.points.resize(n, 2 * n + 1);
  s.weights.resize(2 * n + 1);
  s.points.col(0) = m.mean;
  s.weights[0] = k / (n + k);
  const double w = 1.0 / (2.0 * (n + k));
  for (int i = 0; i < n; ++i) {
    s.points.col(1 + i) = m.mean + root.col(i);
    s.points.col(1 + n + i) = m.mean - root.col(i);
    s.weights[1 + i] = w;
    s.weights[1 + n + i] = w;
  }
  return s;
}

Eigen::VectorXd sample_mean(const SigmaSet& s) {
  KahanVectorSum acc(s.dim());
  for (int i = 0; i < s.size(); ++i) acc.add(s.weights[i] * s.points.col(i));
  return acc.value();
}

Eigen::MatrixXd sample_cov(const SigmaSet& s) {
  const Eigen::VectorXd mu = sample_mean(s);
  KahanMatrixSum acc(s.dim(), s.dim());
  for (int i = 0; i < s.size(); ++i) {
    const Eigen::VectorXd d = s.points.col(i) - mu;
    acc.add(s.weights[i] * (d * d.transpose()));
  }
  Eigen::MatrixXd cov = acc.value();
  return 0.5 * (cov + cov.transpose());
}

GaussianMoments sample_moments(const SigmaSet& s) {
  GaussianMoments m;
  m.mean = sample_mean(s);
  KahanMatrixSum acc(s.dim(), s.dim());
  for (int i = 0; i < s.size(); ++i) {
    const Eigen::VectorXd d = s.points.col(i) - m.mean;
    acc.add(s.weights[i] * (d * d.transpose()));
  }
  Eigen::MatrixXd cov = acc.value();
  m.cov = 0.5 * (cov + cov.transpose());
  return m;
}

HigherMoments sample_higher_moments(const SigmaSet& s) {
  const int n = s.dim();
  const Eigen::VectorXd mu = sample_mean(s);
  KahanVectorSum m2(n), m3(n), m4(n);
  for (int i = 0; i < s.size(); ++i) {
    const Eigen::VectorXd d = s.points.col(i) - mu;
    const Eigen::VectorXd d2 = d.cwiseProduct(d);
    m2.add(s.weights[i] * d2);
    m3.add(s.weights[i] * d2.cwiseProduct(d));
    m4.add(s.weights[i] * d2.cwiseProduct(d2));
  }
  const Eigen::VectorXd var = m2.value();
  for (int j = 0; j < n; ++j) {
    if (!(var[j] > 1e-12)) {
      throw DegenerateVarianceError("sample_higher_moments: variance underflow in dimension " +
                                    std::to_string(j));
    }
  }
  HigherMoments hm;
  const Eigen::VectorXd sigma = var.cwiseSqrt();
  hm.skewness = m3.value().cwiseQuotient(sigma.cwiseProduct(var));
  hm.kurtosis = m4.value().cwiseQuotient(var.cwiseProduct(var));
  return hm;
}

}  // namespace foresee
