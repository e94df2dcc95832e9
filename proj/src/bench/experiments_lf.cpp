#include <cmath>

#include "foresee/bench/csv.hpp"
#include "foresee/bench/experiments.hpp"
#include "foresee/errors.hpp"
#include "foresee/lf_controller.hpp"
#include "foresee/sqp.hpp"
#include "foresee/threads.hpp"

namespace foresee::bench {

namespace {

// Joint leader-follower state [lx, ly, fx, fy, phi]. Only the leader block is
// stochastic; the follower advances deterministically under the input. The
// leader command is time-varying, so the plant carries the wall-clock time of
// prediction step 0.
class LfJointPlant : public ControlledModel {
 public:
  LfJointPlant(double t0, double dt) : t0_(t0), dt_(dt) {}

  int state_dim() const override { return 5; }
  int input_dim() const override { return 2; }

  GaussianMoments conditional_moments(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                      int step) const override {
    const GaussianMoments leader = leader_step_moments(x.head<2>(), t0_ + step * dt_, dt_);
    Eigen::VectorXd mean(5);
    mean.head<2>() = leader.mean;
    mean.tail<3>() = follower_step(x.tail<3>(), u, dt_);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(5, 5);
    cov.topLeftCorner<2, 2>() = leader.cov;
    return {mean, cov};
  }

  Eigen::VectorXd sample(const Eigen::VectorXd& x, const Eigen::VectorXd& u, int step,
                         RngStream& rng) const override {
    Eigen::VectorXd next(5);
    next.head<2>() = leader_step_sample(x.head<2>(), t0_ + step * dt_, dt_, rng);
    next.tail<3>() = follower_step(x.tail<3>(), u, dt_);
    return next;
  }

 private:
  double t0_, dt_;
};

double lf_reward(const Eigen::VectorXd& joint, const LeaderFollowerParams& params) {
  const Eigen::Vector2d r = joint.head<2>() - joint.segment<2>(2);
  const double s = r.norm();
  const double s_ref = 0.5 * (params.s_min + params.s_max);
  const Eigen::Vector2d heading(std::cos(joint[4]), std::sin(joint[4]));
  const double align = s > 1e-9 ? r.dot(heading) / s : 1.0;
  return -((s - s_ref) * (s - s_ref) + (1.0 - align));
}

struct TrialRecord {
  bool completed = true;
  int first_infeasible_step = -1;
  double cumulative_reward = 0.0;
  double min_h1 = std::numeric_limits<double>::infinity();
  double min_h2 = std::numeric_limits<double>::infinity();
  double min_h3 = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> rows;
};

struct ModeSpec {
  std::string name;
  bool bounded = false;
  bool adaptive = false;
};

TrialRecord run_trial(const ExperimentConfig& cfg, const ModeSpec& mode, int trial) {
  const double dt = 1.0 / cfg.lf_control_hz;
  const int steps = static_cast<int>(std::lround(cfg.lf_episode_seconds * cfg.lf_control_hz));

  LfControllerConfig ctrl;
  ctrl.plant.dt = dt;
  ctrl.plant.s_min = cfg.lf_s_min;
  ctrl.plant.s_max = cfg.lf_s_max;
  ctrl.plant.fov_half_angle = cfg.lf_fov_half_angle;
  ctrl.plant.u_max = cfg.lf_u_max;
  ctrl.plant.omega_max = cfg.lf_omega_max;
  ctrl.q_slack = cfg.lf_q_slack;
  ctrl.bounded = mode.bounded;
  ctrl.track_gain_s = cfg.lf_track_gain_s;
  ctrl.track_gain_phi = cfg.lf_track_gain_phi;

  const auto logit = [](double a) { return std::log(a / (1.0 - a)); };
  Eigen::VectorXd raw_theta(4);
  raw_theta << logit(cfg.lf_alpha_clf_init), logit(cfg.lf_alpha_cbf_init),
      logit(cfg.lf_alpha_cbf_init), logit(cfg.lf_alpha_cbf_init);

  Eigen::Vector2d leader(cfg.lf_leader_x0, cfg.lf_leader_y0);
  Eigen::Vector3d follower(cfg.lf_follower_x0, cfg.lf_follower_y0, cfg.lf_follower_phi0);

  ForeseeOptions opts;
  opts.learning_rate = cfg.learning_rate;
  opts.trust_radius = cfg.trust_radius;
  opts.fd_step = cfg.fd_step;

  const double beta_quantile = beta_from_epsilon(cfg.epsilon);

  TrialRecord rec;
  for (int step = 0; step <= steps; ++step) {
    Eigen::VectorXd joint(5);
    joint << leader, follower;
    const double t = step * dt;
    const LfConstraintValues h = lf_constraints(leader, follower, ctrl.plant);
    const double reward = lf_reward(joint, ctrl.plant);
    rec.cumulative_reward += reward;
    rec.min_h1 = std::min(rec.min_h1, h.h1);
    rec.min_h2 = std::min(rec.min_h2, h.h2);
    rec.min_h3 = std::min(rec.min_h3, h.h3);
    if (step == steps) {
      rec.rows.push_back({double(trial), double(step), t, reward, h.h1, h.h2, h.h3,
                          std::nan(""), std::nan(""), squash_rate(raw_theta[0]),
                          squash_rate(raw_theta[1]), squash_rate(raw_theta[2]),
                          squash_rate(raw_theta[3]), 1.0});
      break;
    }

    if (mode.adaptive) {
      // Receding-horizon parameter update on the joint prediction. A QP that
      // turns infeasible inside the prediction falls back to the saturated
      // nominal input so the confidence values still register the violation.
      LfJointPlant plant(t, dt);
      RolloutProblem problem;
      problem.plant = &plant;
      problem.horizon = cfg.lf_pred_horizon;
      problem.ut_k = cfg.ut_k;
      const LfControllerConfig ctrl_copy = ctrl;
      problem.policy_for = [&ctrl_copy](const Eigen::VectorXd& theta) {
        return [&ctrl_copy, theta](const Eigen::VectorXd& x, int) -> Eigen::VectorXd {
          try {
            return lf_cbf_policy(x, theta, ctrl_copy);
          } catch (const QpInfeasibleError&) {
            Eigen::Vector2d u = lf_nominal_input(x, ctrl_copy);
            if (ctrl_copy.bounded) {
              u[0] = std::clamp(u[0], -ctrl_copy.plant.u_max, ctrl_copy.plant.u_max);
              u[1] = std::clamp(u[1], -ctrl_copy.plant.omega_max, ctrl_copy.plant.omega_max);
            }
            return u;
          }
        };
      };
      const LeaderFollowerParams params = ctrl.plant;
      problem.reward = [params](const Eigen::VectorXd& x, const Eigen::VectorXd&, int) {
        return lf_reward(x, params);
      };
      problem.constraints.beta_quantile = beta_quantile;
      problem.constraints.c_fns = {
          [params](const Eigen::VectorXd& x) {
            return lf_constraints(x.head<2>(), x.tail<3>(), params).h1;
          },
          [params](const Eigen::VectorXd& x) {
            return lf_constraints(x.head<2>(), x.tail<3>(), params).h2;
          },
          [params](const Eigen::VectorXd& x) {
            return lf_constraints(x.head<2>(), x.tail<3>(), params).h3;
          }};
      const GaussianMoments x0{joint, Eigen::MatrixXd::Zero(5, 5)};
      for (int it = 0; it < cfg.lf_sqp_iters; ++it) {
        try {
          const ForeseeStepResult fstep = foresee_step(problem, raw_theta, x0, opts);
          raw_theta = fstep.theta_next;
        } catch (const Error&) {
          break;  // infeasible prefix or numerical trouble: keep the rates
        }
      }
    }

    // Execute the strict QP at the measured state.
    Eigen::Vector2d u;
    try {
      u = lf_cbf_policy(joint, raw_theta, ctrl);
    } catch (const QpInfeasibleError&) {
      rec.completed = false;
      rec.first_infeasible_step = step;
      rec.rows.push_back({double(trial), double(step), t, reward, h.h1, h.h2, h.h3,
                          std::nan(""), std::nan(""), squash_rate(raw_theta[0]),
                          squash_rate(raw_theta[1]), squash_rate(raw_theta[2]),
                          squash_rate(raw_theta[3]), 0.0});
      break;
    }
    rec.rows.push_back({double(trial), double(step), t, reward, h.h1, h.h2, h.h3, u[0], u[1],
                        squash_rate(raw_theta[0]), squash_rate(raw_theta[1]),
                        squash_rate(raw_theta[2]), squash_rate(raw_theta[3]), 1.0});

    follower = follower_step(follower, u, dt);
    RngStream leader_rng(cfg.seed, static_cast<std::uint64_t>(trial),
                         static_cast<std::uint64_t>(step));
    leader = leader_step_sample(leader, t, dt, leader_rng);
  }
  return rec;
}

LfModeSummary run_mode(const ExperimentConfig& cfg, const ModeSpec& mode) {
  std::vector<TrialRecord> trials(cfg.num_trials);
  parallel_for(cfg.num_trials, [&](int trial) { trials[trial] = run_trial(cfg, mode, trial); });

  CsvWriter csv(cfg.out_dir + "/lf_" + mode.name + ".csv",
                {"trial", "step", "t", "reward", "h1", "h2", "h3", "u", "omega", "alpha0",
                 "alpha1", "alpha2", "alpha3", "qp_feasible"});
  LfModeSummary summary;
  summary.mode = mode.name;
  summary.trials = cfg.num_trials;
  for (const TrialRecord& rec : trials) {
    for (const auto& row : rec.rows) csv.write_row(row);
    summary.completed += rec.completed ? 1 : 0;
    summary.first_infeasible_step.push_back(rec.first_infeasible_step);
    summary.cumulative_reward.push_back(rec.cumulative_reward);
    summary.min_h1.push_back(rec.min_h1);
    summary.min_h2.push_back(rec.min_h2);
    summary.min_h3.push_back(rec.min_h3);
  }
  return summary;
}

}  // namespace

LfSummary run_leader_follower(const ExperimentConfig& cfg) {
  ensure_directory(cfg.out_dir);
  write_text_file(cfg.out_dir + "/config_effective.ini", render_config(cfg));

  LfSummary summary;
  summary.unbounded_fixed = run_mode(cfg, {"unbounded_fixed", false, false});
  summary.unbounded_adaptive = run_mode(cfg, {"unbounded_adaptive", false, true});
  summary.bounded_fixed = run_mode(cfg, {"bounded_fixed", true, false});
  summary.bounded_adaptive = run_mode(cfg, {"bounded_adaptive", true, true});

  CsvWriter csv(cfg.out_dir + "/lf_summary.csv",
                {"mode", "trial", "completed", "first_infeasible_step", "cumulative_reward",
                 "min_h1", "min_h2", "min_h3"});
  for (const LfModeSummary* m : {&summary.unbounded_fixed, &summary.unbounded_adaptive,
                                 &summary.bounded_fixed, &summary.bounded_adaptive}) {
    for (int trial = 0; trial < m->trials; ++trial) {
      csv.write_row_raw({m->mode, std::to_string(trial),
                         m->first_infeasible_step[trial] < 0 ? "1" : "0",
                         std::to_string(m->first_infeasible_step[trial]),
                         CsvWriter::format(m->cumulative_reward[trial]),
                         CsvWriter::format(m->min_h1[trial]), CsvWriter::format(m->min_h2[trial]),
                         CsvWriter::format(m->min_h3[trial])});
    }
  }
  return summary;
}

}  // namespace foresee::bench
