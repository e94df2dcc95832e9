#pragma once

#include <functional>

#include "foresee/stochastic_model.hpp"

namespace foresee {

// x+ ~ N(A x, Q). Exact under linearization and under the moment identities,
// which makes it the reference model for exactness tests.
class LinearGaussianModel : public StochasticModel {
 public:
  LinearGaussianModel(Eigen::MatrixXd a, const Eigen::MatrixXd& q);

  int state_dim() const override { return static_cast<int>(a_.rows()); }
  GaussianMoments conditional_moments(const Eigen::VectorXd& x, int step) const override;
  Eigen::VectorXd sample(const Eigen::VectorXd& x, int step, RngStream& rng) const override;

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& q() const { return q_; }

 private:
  Eigen::MatrixXd a_, q_, q_root_;
};

// Two-dimensional benchmark: x+ ~ N(g(x), diag(0.01 + g(x)^2)) with
// g(x) = a [cos x1 + 0.01, sin x2 + 0.01]. The additive 0.01 floor keeps the
// covariance positive definite for every state.
class CosSinBenchmark : public StochasticModel {
 public:
  explicit CosSinBenchmark(double a) : a_(a) {}

  int state_dim() const override { return 2; }
  GaussianMoments conditional_moments(const Eigen::VectorXd& x, int step) const override;
  Eigen::VectorXd sample(const Eigen::VectorXd& x, int step, RngStream& rng) const override;

  Eigen::Vector2d g(const Eigen::Vector2d& x) const;

 private:
  double a_;
};

// Marginal moments of Gamma(shape k, scale b): mean k b, variance k b^2,
// skewness 2/sqrt(k), excess-free kurtosis 6/k + 3. Throws
// NonPositiveShapeError for non-positive parameters.
GaussianMoments gamma_moments(double shape, double scale);
HigherMoments gamma_higher_moments(double shape, double scale);

// Scalar dynamics whose next state is gamma-distributed with state-dependent
// shape and scale.
class GammaBenchmark : public StochasticModel {
 public:
  using ScalarFn = std::function<double(double)>;

  // Defaults: shape |x| + 1, scale 1. The wiring of state to shape/scale is a
  // configuration choice, not part of the benchmark definition.
  GammaBenchmark();
  GammaBenchmark(ScalarFn shape_fn, ScalarFn scale_fn);

  int state_dim() const override { return 1; }
  GaussianMoments conditional_moments(const Eigen::VectorXd& x, int step) const override;
  Eigen::VectorXd sample(const Eigen::VectorXd& x, int step, RngStream& rng) const override;

  double shape_at(double x) const;
  double scale_at(double x) const;

 private:
  ScalarFn shape_fn_, scale_fn_;
};

// Deterministic step map of the dynamic unicycle, state [px, py, psi, v],
// control [omega, accel]: f(x) = x + [v cos psi, v sin psi, omega, accel] dt.
Eigen::Vector4d unicycle_step_mean(const Eigen::Vector4d& x, const Eigen::Vector2d& u, double dt);

// Uncertain unicycle: x+ ~ N(1.5 f(x), diag((f(x) - x)^2) / 10).
class DynamicUnicycle : public ControlledModel {
 public:
  explicit DynamicUnicycle(double dt) : dt_(dt) {}

  int state_dim() const override { return 4; }
  int input_dim() const override { return 2; }
  GaussianMoments conditional_moments(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                      int step) const override;
  Eigen::VectorXd sample(const Eigen::VectorXd& x, const Eigen::VectorXd& u, int step,
                         RngStream& rng) const override;

  double dt() const { return dt_; }

 private:
  double dt_;
};

// Leader-follower scenario geometry and limits.
struct LeaderFollowerParams {
  double dt = 0.05;
  double s_min = 0.3;                  // m, collision distance
  double s_max = 2.0;                  // m, detection range
  double fov_half_angle = M_PI / 3.0;  // rad
  double u_max = 2.5;                  // m/s
  double omega_max = 4.0;              // rad/s
};

// Leader velocity command at continuous time t: u_x = 2, u_y = 3 cos(4 pi t).
Eigen::Vector2d leader_command(double t);

// Discrete leader step p+ = p + dt * draw with draw ~ N(1.25 u,
// 0.25 (u_x^2 + u_y^2) I2), i.e. conditional moments (p + 1.25 u dt,
// 0.25 (u_x^2 + u_y^2) dt^2 I2).
GaussianMoments leader_step_moments(const Eigen::Vector2d& p, double t, double dt);
Eigen::Vector2d leader_step_sample(const Eigen::Vector2d& p, double t, double dt, RngStream& rng);

// Follower unicycle kinematics, state [px, py, phi], control [u, omega].
Eigen::Vector3d follower_step(const Eigen::Vector3d& x, const Eigen::Vector2d& u, double dt);

struct LfConstraintValues {
  double h1;  // s^2 - s_min^2
  double h2;  // s_max^2 - s^2
  double h3;  // bearing . heading - cos(gamma)
  double v;   // (s - (s_min + s_max)/2)^2
};

// Throws CoincidentAgentsError when the separation is below 1e-9. h3 reads
// the scalar field-of-view form: unit bearing onto the heading unit vector.
LfConstraintValues lf_constraints(const Eigen::Vector2d& leader, const Eigen::Vector3d& follower,
                                  const LeaderFollowerParams& params);

}  // namespace foresee
