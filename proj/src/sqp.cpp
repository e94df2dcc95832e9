#include "foresee/sqp.hpp"

#include <cmath>
#include <stdexcept>

#include "foresee/errors.hpp"
#include "foresee/lp.hpp"

namespace foresee {

namespace {

// Rows "cf + d'grad >= 0" as -grad' d <= cf for every tracked (i, tau) except
// those listed in `skip`.
void append_retention_rows(const Eigen::MatrixXd& cf_values,
                           const std::vector<Eigen::MatrixXd>& cf_grads,
                           const std::vector<std::pair<int, int>>& skip, Eigen::MatrixXd& a,
                           Eigen::VectorXd& b) {
  const int k = static_cast<int>(cf_values.rows());
  const int steps = static_cast<int>(cf_values.cols());
  const int kappa = k > 0 ? static_cast<int>(cf_grads[0].rows()) : 0;
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (int i = 0; i < k; ++i) {
    for (int tau = 0; tau < steps; ++tau) {
      bool skipped = false;
      for (const auto& [si, stau] : skip) {
        if (si == i && stau == tau) {
          skipped = true;
          break;
        }
      }
      if (skipped) continue;
      rows.emplace_back(-cf_grads[i].col(tau).transpose());
      rhs.push_back(cf_values(i, tau));
    }
  }
  a.resize(static_cast<Eigen::Index>(rows.size()), kappa);
  b.resize(static_cast<Eigen::Index>(rhs.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    a.row(static_cast<Eigen::Index>(r)) = rows[r];
    b[static_cast<Eigen::Index>(r)] = rhs[r];
  }
}

}  // namespace

UpdateDirection sqp_direction_case1(const Eigen::VectorXd& reward_grad,
                                    const Eigen::MatrixXd& cf_values,
                                    const std::vector<Eigen::MatrixXd>& cf_grads,
                                    double trust_radius) {
  if (cf_values.size() > 0 && cf_values.minCoeff() < 0.0) {
    throw std::invalid_argument("sqp_direction_case1: all confidence values must be nonnegative");
  }
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  append_retention_rows(cf_values, cf_grads, {}, a, b);
  const LpResult lp = lp_solve(-reward_grad, a, b, trust_radius);
  UpdateDirection dir;
  dir.d = lp.x;
  dir.lp_objective = lp.objective;
  dir.slack_values.resize(0);
  return dir;
}

UpdateDirection sqp_direction_case2(const Eigen::MatrixXd& cf_values,
                                    const std::vector<Eigen::MatrixXd>& cf_grads,
                                    const std::vector<std::pair<int, int>>& violated,
                                    double trust_radius) {
  if (violated.empty()) {
    throw std::invalid_argument("sqp_direction_case2: violated set must be nonempty");
  }
  const int terminal = static_cast<int>(cf_values.cols()) - 1;
  for (const auto& [i, tau] : violated) {
    if (tau != terminal) {
      throw std::invalid_argument("sqp_direction_case2: violations must be terminal");
    }
  }
  const int kappa = static_cast<int>(cf_grads[0].rows());

  UpdateDirection dir;
  dir.relaxed = violated;
  dir.slack_values.resize(static_cast<Eigen::Index>(violated.size()));

  // Gradient of the squared slack sum(j in J) delta_j^2 with
  // delta_j = max(0, -cf_j): d/dtheta = sum_j 2 delta_j * (-grad cf_j).
  Eigen::VectorXd objective = Eigen::VectorXd::Zero(kappa);
  for (std::size_t j = 0; j < violated.size(); ++j) {
    const auto& [i, tau] = violated[j];
    const double slack = std::max(0.0, -cf_values(i, tau));
    dir.slack_values[static_cast<Eigen::Index>(j)] = slack;
    objective -= 2.0 * slack * cf_grads[i].col(tau);
  }

  if (objective.cwiseAbs().maxCoeff() < 1e-14) {
    dir.d = Eigen::VectorXd::Zero(kappa);  // stationary: nothing reduces the slack
    dir.lp_objective = 0.0;
    return dir;
  }

  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  append_retention_rows(cf_values, cf_grads, violated, a, b);
  const LpResult lp = lp_solve(objective, a, b, trust_radius);
  dir.d = lp.x;
  dir.lp_objective = lp.objective;

  // The hinge makes the true linearized slack piecewise quadratic; back off
  // the LP vertex until it does not exceed the value at d = 0.
  const auto linearized_slack = [&](const Eigen::VectorXd& d) {
    double s = 0.0;
    for (const auto& [i, tau] : violated) {
      const double v = std::max(0.0, -cf_values(i, tau) - d.dot(cf_grads[i].col(tau)));
      s += v * v;
    }
    return s;
  };
  const double at_zero = linearized_slack(Eigen::VectorXd::Zero(kappa));
  for (int halvings = 0; halvings < 40 && linearized_slack(dir.d) > at_zero; ++halvings) {
    dir.d *= 0.5;
  }
  if (linearized_slack(dir.d) > at_zero) dir.d.setZero();
  return dir;
}

ForeseeStepResult foresee_step(const RolloutProblem& problem, const Eigen::VectorXd& theta,
                               const GaussianMoments& x0, const ForeseeOptions& opts) {
  if (!(opts.learning_rate > 0.0) || opts.learning_rate > 1.0) {
    throw std::invalid_argument("foresee_step: learning rate must be in (0, 1]");
  }
  ForeseeStepResult res;
  res.grad = rollout_gradient(problem, theta, x0, opts.fd_step);
  const Eigen::MatrixXd& cf = res.grad.base.cf_values;
  const int terminal = static_cast<int>(cf.cols()) - 1;

  std::vector<std::pair<int, int>> violated;
  for (int i = 0; i < cf.rows(); ++i) {
    for (int tau = 0; tau <= terminal; ++tau) {
      if (cf(i, tau) < -opts.violation_tol) {
        if (tau != terminal) {
          throw InfeasiblePrefixError("foresee_step: constraint " + std::to_string(i) +
                                          " violated at non-terminal step " + std::to_string(tau),
                                      tau, i);
        }
        violated.emplace_back(i, tau);
      }
    }
  }

  if (violated.empty()) {
    // Clamp tiny negative roundoff so the Case-1 precondition holds exactly.
    Eigen::MatrixXd cf_clamped = cf.cwiseMax(0.0);
    res.direction =
        sqp_direction_case1(res.grad.reward_grad, cf_clamped, res.grad.cf_grads,
                            opts.trust_radius);
    res.diag.step_case = StepCase::Feasible;
  } else {
    res.direction = sqp_direction_case2(cf, res.grad.cf_grads, violated, opts.trust_radius);
    res.diag.step_case = StepCase::TerminalSlack;
  }

  res.theta_next = theta + opts.learning_rate * res.direction.d;
  res.diag.expected_reward = res.grad.base.expected_reward;
  res.diag.min_cf = cf.size() > 0 ? cf.minCoeff() : 0.0;
  res.diag.slack_norm = res.direction.slack_values.size() > 0
                            ? res.direction.slack_values.norm()
                            : 0.0;
  res.diag.d_inf_norm =
      res.direction.d.size() > 0 ? res.direction.d.cwiseAbs().maxCoeff() : 0.0;
  res.diag.lp_objective = res.direction.lp_objective;
  return res;
}

}  // namespace foresee
