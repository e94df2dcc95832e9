#include <cmath>

#include "foresee/bench/csv.hpp"
#include "foresee/bench/experiments.hpp"
#include "foresee/errors.hpp"
#include "foresee/models.hpp"
#include "foresee/sqp.hpp"
#include "foresee/threads.hpp"
#include "foresee/unscented.hpp"

namespace foresee::bench {

namespace {

struct TrajoptSetup {
  DynamicUnicycle plant{0.05};
  RolloutProblem problem;
  GaussianMoments x0;
  Eigen::Vector2d goal;
  Eigen::Vector2d obstacle;
  double d_min = 0.5;
};

TrajoptSetup make_setup(const ExperimentConfig& cfg, double beta_quantile) {
  TrajoptSetup s;
  s.plant = DynamicUnicycle(cfg.dt);
  s.goal = Eigen::Vector2d(cfg.uni_goal_x, cfg.uni_goal_y);
  s.obstacle = Eigen::Vector2d(cfg.uni_obstacle_x, cfg.uni_obstacle_y);
  s.d_min = cfg.uni_obstacle_radius;
  const int horizon = cfg.uni_horizon;

  s.problem.plant = &s.plant;
  s.problem.horizon = horizon;
  s.problem.ut_k = cfg.ut_k;
  s.problem.policy_for = [horizon](const Eigen::VectorXd& theta) {
    return [theta, horizon](const Eigen::VectorXd&, int step) {
      return Eigen::Vector2d(theta.segment(2 * std::min(step, horizon - 1), 2));
    };
  };
  const Eigen::Vector2d goal = s.goal;
  s.problem.reward = [goal](const Eigen::VectorXd& x, const Eigen::VectorXd& u, int) {
    return -(10.0 * (x.head<2>() - goal).squaredNorm() + u.squaredNorm());
  };
  const Eigen::Vector2d obstacle = s.obstacle;
  const double d_min2 = s.d_min * s.d_min;
  s.problem.constraints.c_fns = {[obstacle, d_min2](const Eigen::VectorXd& x) {
    return (x.head<2>() - obstacle).squaredNorm() - d_min2;
  }};
  s.problem.constraints.beta_quantile = beta_quantile;

  Eigen::Vector4d x0;
  x0 << cfg.uni_start_x, cfg.uni_start_y, cfg.uni_start_psi, cfg.uni_start_v;
  s.x0 = GaussianMoments{x0, Eigen::Matrix4d::Zero()};
  return s;
}

struct OptimizeOutcome {
  Eigen::VectorXd theta;
  bool converged = false;
  int iterations = 0;
};

// SQP loop with step-halving: accept a candidate only if the prefix stays
// feasible and (Case 1) the reward actually improves or (Case 2) the true
// terminal slack shrinks. Stops when even the smallest step is rejected or
// the direction vanishes.
OptimizeOutcome optimize(const RolloutProblem& problem, const GaussianMoments& x0,
                         Eigen::VectorXd theta, const ExperimentConfig& cfg, CsvWriter& diag) {
  ForeseeOptions opts;
  opts.learning_rate = cfg.learning_rate;
  opts.trust_radius = cfg.trust_radius;
  opts.fd_step = cfg.fd_step;
  const double tol_violation = 1e-9;
  const int terminal = problem.horizon;

  const auto violations = [&](const Eigen::MatrixXd& cf) {
    int prefix = 0;
    double terminal_slack_sq = 0.0;
    for (int i = 0; i < cf.rows(); ++i) {
      for (int tau = 0; tau < terminal; ++tau) {
        if (cf(i, tau) < -tol_violation) ++prefix;
      }
      if (cf(i, terminal) < 0.0) terminal_slack_sq += cf(i, terminal) * cf(i, terminal);
    }
    return std::pair<int, double>(prefix, terminal_slack_sq);
  };

  OptimizeOutcome out;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    out.iterations = iter + 1;
    ForeseeStepResult step;
    try {
      step = foresee_step(problem, theta, x0, opts);
    } catch (const InfeasiblePrefixError&) {
      break;  // cannot recover inside the two update rules
    }
    diag.write_row({double(iter), step.diag.step_case == StepCase::Feasible ? 1.0 : 2.0,
                    step.diag.expected_reward, step.diag.min_cf, step.diag.slack_norm,
                    step.diag.d_inf_norm});
    if (step.diag.d_inf_norm == 0.0) {
      out.converged = true;
      break;
    }
    const auto [base_prefix, base_slack] = violations(step.grad.base.cf_values);
    const double base_reward = step.grad.base.expected_reward;

    bool accepted = false;
    double scale = 1.0;
    while (opts.learning_rate * scale * step.diag.d_inf_norm >= cfg.tolerance) {
      const Eigen::VectorXd candidate = theta + opts.learning_rate * scale * step.direction.d;
      RolloutResult trial;
      try {
        trial = rollout(problem, candidate, x0);
      } catch (const PolicyDomainError&) {
        scale *= 0.5;
        continue;
      }
      const auto [prefix, slack] = violations(trial.cf_values);
      bool ok = prefix == 0;
      if (ok) {
        if (step.diag.step_case == StepCase::Feasible) {
          const double predicted = step.direction.d.dot(step.grad.reward_grad);
          ok = trial.expected_reward >=
               base_reward + 1e-4 * opts.learning_rate * scale * predicted;
        } else {
          ok = slack < base_slack || (slack == 0.0 && base_slack == 0.0);
        }
      }
      if (ok) {
        theta = candidate;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      out.converged = true;  // no admissible improving step at the tolerance
      break;
    }
  }
  out.theta = theta;
  return out;
}

UnicycleCaseSummary run_case(const ExperimentConfig& cfg, double beta_quantile,
                             const std::string& tag) {
  TrajoptSetup s = make_setup(cfg, beta_quantile);
  const int horizon = cfg.uni_horizon;

  CsvWriter diag(cfg.out_dir + "/optimizer_diag_" + tag + ".csv",
                 {"iteration", "case", "expected_reward", "min_cf", "slack_norm", "d_inf_norm"});
  const OptimizeOutcome outcome =
      optimize(s.problem, s.x0, Eigen::VectorXd::Zero(2 * horizon), cfg, diag);

  UnicycleCaseSummary summary;
  summary.converged = outcome.converged;
  summary.iterations = outcome.iterations;

  const RolloutResult final_rollout = rollout(s.problem, outcome.theta, s.x0);
  summary.min_cf = final_rollout.cf_values.minCoeff();
  summary.final_reward = final_rollout.expected_reward;

  {
    CsvWriter csv(cfg.out_dir + "/trajectory_" + tag + ".csv", [] {
      std::vector<std::string> cols = {"step"};
      for (int i = 0; i < 4; ++i) cols.push_back("mean_" + std::to_string(i));
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          cols.push_back("cov_" + std::to_string(i) + std::to_string(j));
      cols.insert(cols.end(), {"u_omega", "u_accel", "cf"});
      return cols;
    }());
    for (int tau = 0; tau <= horizon; ++tau) {
      std::vector<double> row = {double(tau)};
      const GaussianMoments& m = final_rollout.prediction.step_moments[tau];
      for (int i = 0; i < 4; ++i) row.push_back(m.mean[i]);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) row.push_back(m.cov(i, j));
      if (tau < horizon) {
        row.push_back(outcome.theta[2 * tau]);
        row.push_back(outcome.theta[2 * tau + 1]);
      } else {
        row.push_back(std::nan(""));
        row.push_back(std::nan(""));
      }
      row.push_back(final_rollout.cf_values(0, tau));
      csv.write_row(row);
    }
  }

  // Validate the open-loop plan against the sampled dynamics.
  {
    const PolicyFn policy = s.problem.policy_for(outcome.theta);
    const ClosedLoopModel closed(s.plant, policy);
    const auto steps = monte_carlo_propagate(s.x0.mean, closed, horizon, cfg.uni_mc_particles,
                                             RngStream(cfg.seed, 9100).next_u64());
    CsvWriter csv(cfg.out_dir + "/mc_validation_" + tag + ".csv",
                  {"step", "empirical_satisfaction"});
    const auto& c_fn = s.problem.constraints.c_fns[0];
    for (int tau = 0; tau <= horizon; ++tau) {
      long ok = 0;
      for (int p = 0; p < steps[tau].cols(); ++p) {
        if (c_fn(steps[tau].col(p)) >= 0.0) ++ok;
      }
      const double frac = double(ok) / double(steps[tau].cols());
      summary.empirical_satisfaction.push_back(frac);
      csv.write_row({double(tau), frac});
    }
  }
  return summary;
}

}  // namespace

UnicycleSummary run_unicycle_trajopt(const ExperimentConfig& cfg) {
  ensure_directory(cfg.out_dir);
  write_text_file(cfg.out_dir + "/config_effective.ini", render_config(cfg));
  UnicycleSummary summary;
  summary.expectation = run_case(cfg, 0.0, "case1");
  summary.ci = run_case(cfg, cfg.ci_factor, "case2");
  return summary;
}

}  // namespace foresee::bench
