#include "foresee/lf_controller.hpp"

#include <cmath>

#include "foresee/errors.hpp"

namespace foresee {

namespace {

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

Eigen::Vector2d lf_nominal_input(const Eigen::VectorXd& joint, const LfControllerConfig& cfg) {
  const Eigen::Vector2d r = joint.head<2>() - joint.segment<2>(2);
  const double s = r.norm();
  if (s < 1e-9) throw CoincidentAgentsError("lf_nominal_input: agents coincide");
  const double s_ref = 0.5 * (cfg.plant.s_min + cfg.plant.s_max);
  const double bearing = std::atan2(r[1], r[0]);
  return {cfg.track_gain_s * (s - s_ref), cfg.track_gain_phi * wrap_angle(bearing - joint[4])};
}

CbfQpProblem build_lf_qp(const Eigen::VectorXd& joint, const Eigen::VectorXd& raw_theta,
                         const LfControllerConfig& cfg) {
  const LeaderFollowerParams& plant = cfg.plant;
  const double dt = plant.dt;

  // Leader frozen over the step; only the follower block moves with u.
  const StepFn step = [dt](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    Eigen::VectorXd next = x;
    next.tail<3>() = follower_step(x.tail<3>(), u, dt);
    return next;
  };
  const auto constraint = [&plant](int which) {
    return [&plant, which](const Eigen::VectorXd& x) {
      const LfConstraintValues v = lf_constraints(x.head<2>(), x.tail<3>(), plant);
      return which == 0 ? v.h1 : (which == 1 ? v.h2 : v.h3);
    };
  };
  const StateFn v_fn = [&plant](const Eigen::VectorXd& x) {
    return lf_constraints(x.head<2>(), x.tail<3>(), plant).v;
  };

  CbfQpProblem prob;
  prob.p = Eigen::Matrix2d::Identity();
  prob.q = cfg.q_slack;
  prob.u_d = lf_nominal_input(joint, cfg);
  prob.alphas.resize(raw_theta.size());
  for (int i = 0; i < raw_theta.size(); ++i) prob.alphas[i] = squash_rate(raw_theta[i]);
  prob.lin = linearize_constraints(joint, step, {constraint(0), constraint(1), constraint(2)},
                                   v_fn, 2);
  if (cfg.bounded) {
    prob.a_in.resize(4, 2);
    prob.a_in << 1, 0, -1, 0, 0, 1, 0, -1;
    prob.b_in.resize(4);
    prob.b_in << plant.u_max, plant.u_max, plant.omega_max, plant.omega_max;
  } else {
    prob.a_in.resize(0, 2);
    prob.b_in.resize(0);
  }
  return prob;
}

Eigen::Vector2d lf_cbf_policy(const Eigen::VectorXd& joint, const Eigen::VectorXd& raw_theta,
                              const LfControllerConfig& cfg) {
  const CbfQpSolution sol = solve_cbf_qp(build_lf_qp(joint, raw_theta, cfg));
  if (sol.status != QpStatus::Optimal) {
    throw QpInfeasibleError("lf_cbf_policy: QP infeasible", sol.infeasible_rows);
  }
  return sol.u;
}

}  // namespace foresee
