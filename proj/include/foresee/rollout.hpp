#pragma once

#include <functional>
#include <vector>

#include "foresee/propagation.hpp"
#include "foresee/stochastic_model.hpp"

namespace foresee {

// Two-sided symmetric Gaussian quantile factor for risk epsilon:
// P(|Z| <= beta) = 1 - epsilon, so epsilon = 0.05 gives beta = 1.96.
// epsilon = 1 turns the confidence function into a plain expectation.
double beta_from_epsilon(double epsilon);

struct ConstraintSpec {
  std::vector<std::function<double(const Eigen::VectorXd&)>> c_fns;
  double beta_quantile = 0.0;  // beta(epsilon)
};

// Everything needed to evaluate a policy over the prediction horizon:
// the plant, the theta -> policy mapping, a per-step reward, and the chance
// constraints in confidence-function form.
struct RolloutProblem {
  const ControlledModel* plant = nullptr;
  std::function<PolicyFn(const Eigen::VectorXd& theta)> policy_for;
  std::function<double(const Eigen::VectorXd& x, const Eigen::VectorXd& u, int step)> reward;
  ConstraintSpec constraints;
  int horizon = 1;
  double ut_k = 1.0;
};

struct RolloutResult {
  double expected_reward = 0.0;
  // cf(i, tau) = E_s[c_i(x_tau)] - beta * sqrt(Var_s[c_i(x_tau)]), evaluated
  // on the compressed step-tau set, tau = 0..H.
  Eigen::MatrixXd cf_values;
  HorizonPrediction prediction;
};

// Expand, accumulate the expected reward on the expanded set, compress; the
// pipeline is deterministic, so identical inputs give bitwise identical
// results. QP or geometry failures inside the policy surface as
// PolicyDomainError.
RolloutResult rollout(const RolloutProblem& problem, const Eigen::VectorXd& theta,
                      const GaussianMoments& x0);

struct RolloutGradient {
  Eigen::VectorXd reward_grad;            // kappa
  std::vector<Eigen::MatrixXd> cf_grads;  // K entries, each kappa x (H+1)
  RolloutResult base;
};

// Central finite differences over theta; every perturbed rollout yields the
// reward and all confidence values at once. Throws NonFiniteGradientError.
RolloutGradient rollout_gradient(const RolloutProblem& problem, const Eigen::VectorXd& theta,
                                 const GaussianMoments& x0, double fd_step = 1e-5);

}  // namespace foresee
