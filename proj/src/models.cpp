#include "foresee/models.hpp"

#include <cmath>

#include "foresee/errors.hpp"
#include "foresee/linalg.hpp"

namespace foresee {

LinearGaussianModel::LinearGaussianModel(Eigen::MatrixXd a, const Eigen::MatrixXd& q)
    : a_(std::move(a)), q_(0.5 * (q + q.transpose())), q_root_(matrix_sqrt(q_)) {}

GaussianMoments LinearGaussianModel::conditional_moments(const Eigen::VectorXd& x, int) const {
  return {a_ * x, q_};
}

Eigen::VectorXd LinearGaussianModel::sample(const Eigen::VectorXd& x, int, RngStream& rng) const {
  Eigen::VectorXd z(state_dim());
  for (int i = 0; i < z.size(); ++i) z[i] = rng.next_gaussian();
  return a_ * x + q_root_ * z;
}

Eigen::Vector2d CosSinBenchmark::g(const Eigen::Vector2d& x) const {
  return a_ * Eigen::Vector2d(std::cos(x[0]) + 0.01, std::sin(x[1]) + 0.01);
}

GaussianMoments CosSinBenchmark::conditional_moments(const Eigen::VectorXd& x, int) const {
  const Eigen::Vector2d mean = g(x);
  return {mean, (0.01 + mean.array().square()).matrix().asDiagonal()};
}

Eigen::VectorXd CosSinBenchmark::sample(const Eigen::VectorXd& x, int, RngStream& rng) const {
  const Eigen::Vector2d mean = g(x);
  Eigen::Vector2d out;
  for (int i = 0; i < 2; ++i) {
    out[i] = mean[i] + std::sqrt(0.01 + mean[i] * mean[i]) * rng.next_gaussian();
  }
  return out;
}

GaussianMoments gamma_moments(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw NonPositiveShapeError("gamma_moments: shape and scale must be positive");
  }
  Eigen::VectorXd mean(1), var(1);
  mean[0] = shape * scale;
  var[0] = shape * scale * scale;
  return {mean, var.asDiagonal()};
}

HigherMoments gamma_higher_moments(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw NonPositiveShapeError("gamma_higher_moments: shape and scale must be positive");
  }
  HigherMoments hm;
  hm.skewness = Eigen::VectorXd::Constant(1, 2.0 / std::sqrt(shape));
  hm.kurtosis = Eigen::VectorXd::Constant(1, 6.0 / shape + 3.0);
  return hm;
}

GammaBenchmark::GammaBenchmark()
    : shape_fn_([](double x) { return std::abs(x) + 1.0; }), scale_fn_([](double) { return 1.0; }) {}

GammaBenchmark::GammaBenchmark(ScalarFn shape_fn, ScalarFn scale_fn)
    : shape_fn_(std::move(shape_fn)), scale_fn_(std::move(scale_fn)) {}

double GammaBenchmark::shape_at(double x) const {
  const double k = shape_fn_(x);
  if (!(k > 0.0)) throw NonPositiveShapeError("GammaBenchmark: shape_fn must be positive");
  return k;
}

double GammaBenchmark::scale_at(double x) const {
  const double b = scale_fn_(x);
  if (!(b > 0.0)) throw NonPositiveShapeError("GammaBenchmark: scale_fn must be positive");
  return b;
}

GaussianMoments GammaBenchmark::conditional_moments(const Eigen::VectorXd& x, int) const {
  return gamma_moments(shape_at(x[0]), scale_at(x[0]));
}

Eigen::VectorXd GammaBenchmark::sample(const Eigen::VectorXd& x, int, RngStream& rng) const {
  Eigen::VectorXd out(1);
  out[0] = rng.next_gamma(shape_at(x[0]), scale_at(x[0]));
  return out;
}

Eigen::Vector4d unicycle_step_mean(const Eigen::Vector4d& x, const Eigen::Vector2d& u, double dt) {
  return x + dt * Eigen::Vector4d(x[3] * std::cos(x[2]), x[3] * std::sin(x[2]), u[0], u[1]);
}

GaussianMoments DynamicUnicycle::conditional_moments(const Eigen::VectorXd& x,
                                                     const Eigen::VectorXd& u, int) const {
  const Eigen::Vector4d f = unicycle_step_mean(x, u, dt_);
  const Eigen::Vector4d delta = f - Eigen::Vector4d(x);
  return {1.5 * f, (delta.array().square() / 10.0).matrix().asDiagonal()};
}

Eigen::VectorXd DynamicUnicycle::sample(const Eigen::VectorXd& x, const Eigen::VectorXd& u, int,
                                        RngStream& rng) const {
  const Eigen::Vector4d f = unicycle_step_mean(x, u, dt_);
  const Eigen::Vector4d sd = (f - Eigen::Vector4d(x)).cwiseAbs() / std::sqrt(10.0);
  Eigen::Vector4d out;
  for (int i = 0; i < 4; ++i) out[i] = 1.5 * f[i] + sd[i] * rng.next_gaussian();
  return out;
}

Eigen::Vector2d leader_command(double t) { return {2.0, 3.0 * std::cos(4.0 * M_PI * t)}; }

GaussianMoments leader_step_moments(const Eigen::Vector2d& p, double t, double dt) {
  const Eigen::Vector2d u = leader_command(t);
  const double var = 0.25 * u.squaredNorm() * dt * dt;
  return {p + 1.25 * dt * u, var * Eigen::Matrix2d::Identity()};
}

Eigen::Vector2d leader_step_sample(const Eigen::Vector2d& p, double t, double dt, RngStream& rng) {
  const Eigen::Vector2d u = leader_command(t);
  const double sd = 0.5 * u.norm();
  return p + dt * (1.25 * u + sd * Eigen::Vector2d(rng.next_gaussian(), rng.next_gaussian()));
}

Eigen::Vector3d follower_step(const Eigen::Vector3d& x, const Eigen::Vector2d& u, double dt) {
  return x + dt * Eigen::Vector3d(u[0] * std::cos(x[2]), u[0] * std::sin(x[2]), u[1]);
}

LfConstraintValues lf_constraints(const Eigen::Vector2d& leader, const Eigen::Vector3d& follower,
                                  const LeaderFollowerParams& params) {
  const Eigen::Vector2d r = leader - follower.head<2>();
  const double s = r.norm();
  if (s < 1e-9) throw CoincidentAgentsError("lf_constraints: leader and follower coincide");
  const Eigen::Vector2d bearing = r / s;
  const Eigen::Vector2d heading(std::cos(follower[2]), std::sin(follower[2]));
  LfConstraintValues v;
  v.h1 = s * s - params.s_min * params.s_min;
  v.h2 = params.s_max * params.s_max - s * s;
  v.h3 = bearing.dot(heading) - std::cos(params.fov_half_angle);
  const double s_ref = 0.5 * (params.s_min + params.s_max);
  v.v = (s - s_ref) * (s - s_ref);
  return v;
}

}  // namespace foresee
