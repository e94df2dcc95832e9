#pragma once

#include <utility>
#include <vector>

#include "foresee/rollout.hpp"

namespace foresee {

struct UpdateDirection {
  Eigen::VectorXd d;
  std::vector<std::pair<int, int>> relaxed;  // (constraint, step) indices J
  Eigen::VectorXd slack_values;              // delta_J >= 0, in `relaxed` order
  double lp_objective = 0.0;
};

// Feasible case: maximize the first-order reward improvement subject to every
// confidence value staying nonnegative to first order and the trust box
// ||d||_inf <= trust_radius. d = 0 is always feasible, so the LP objective
// d' reward_grad is >= 0.
UpdateDirection sqp_direction_case1(const Eigen::VectorXd& reward_grad,
                                    const Eigen::MatrixXd& cf_values,
                                    const std::vector<Eigen::MatrixXd>& cf_grads,
                                    double trust_radius);

// Terminal-slack case: minimize the linearized squared slack of the violated
// terminal constraints, keeping all satisfied constraints satisfied to first
// order. The returned direction never increases the linearized slack model
// relative to d = 0 (the LP step is backtracked if an overshoot past the
// hinge would).
UpdateDirection sqp_direction_case2(const Eigen::MatrixXd& cf_values,
                                    const std::vector<Eigen::MatrixXd>& cf_grads,
                                    const std::vector<std::pair<int, int>>& violated,
                                    double trust_radius);

struct ForeseeOptions {
  double learning_rate = 0.5;  // beta in (0, 1]
  double trust_radius = 1.0;
  double fd_step = 1e-5;
  double violation_tol = 1e-12;  // cf < -tol counts as violated
};

enum class StepCase { Feasible, TerminalSlack };

struct StepDiagnostics {
  int iteration = 0;
  StepCase step_case = StepCase::Feasible;
  double expected_reward = 0.0;
  double min_cf = 0.0;
  double slack_norm = 0.0;
  double d_inf_norm = 0.0;
  double lp_objective = 0.0;
};

struct ForeseeStepResult {
  Eigen::VectorXd theta_next;
  StepDiagnostics diag;
  RolloutGradient grad;
  UpdateDirection direction;
};

// One parameter update: rollout, gradients, Case-1 or Case-2 direction
// (Case 2 if and only if violations occur only at the terminal step), then
// theta + learning_rate * d. A violation before the terminal step raises
// InfeasiblePrefixError.
ForeseeStepResult foresee_step(const RolloutProblem& problem, const Eigen::VectorXd& theta,
                               const GaussianMoments& x0, const ForeseeOptions& opts);

}  // namespace foresee
