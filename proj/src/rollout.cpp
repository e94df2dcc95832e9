#include "foresee/rollout.hpp"

#include <cmath>
#include <stdexcept>

#include "foresee/errors.hpp"
#include "foresee/linalg.hpp"
#include "foresee/unscented.hpp"

namespace foresee {

double beta_from_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw std::invalid_argument("beta_from_epsilon: risk must be in (0, 1]");
  }
  const double p = 1.0 - epsilon;
  if (p <= 0.0) return 0.0;
  // Winitzki initial guess for erfinv, polished by Newton on erf.
  const double a = 0.147;
  const double l = std::log(1.0 - p * p);
  const double t = 2.0 / (M_PI * a) + 0.5 * l;
  double x = std::sqrt(std::sqrt(t * t - l / a) - t);
  for (int i = 0; i < 3; ++i) {
    const double err = std::erf(x) - p;
    x -= err * 0.5 * std::sqrt(M_PI) * std::exp(x * x);
  }
  return std::sqrt(2.0) * x;
}

namespace {

Eigen::VectorXd confidence_values(const SigmaSet& s, const ConstraintSpec& spec) {
  const int k = static_cast<int>(spec.c_fns.size());
  Eigen::VectorXd cf(k);
  for (int i = 0; i < k; ++i) {
    double mean = 0.0, mean_c = 0.0;
    Eigen::VectorXd vals(s.size());
    for (int j = 0; j < s.size(); ++j) {
      vals[j] = spec.c_fns[i](s.points.col(j));
      KahanVectorSum::add_scalar(mean, mean_c, s.weights[j] * vals[j]);
    }
    const double mu = mean + mean_c;
    double var = 0.0, var_c = 0.0;
    for (int j = 0; j < s.size(); ++j) {
      const double d = vals[j] - mu;
      KahanVectorSum::add_scalar(var, var_c, s.weights[j] * d * d);
    }
    cf[i] = mu - spec.beta_quantile * std::sqrt(std::max(0.0, var + var_c));
  }
  return cf;
}

}  // namespace

RolloutResult rollout(const RolloutProblem& problem, const Eigen::VectorXd& theta,
                      const GaussianMoments& x0) {
  if (problem.horizon < 1) throw std::invalid_argument("rollout: horizon must be >= 1");
  const PolicyFn policy = problem.policy_for(theta);
  const ClosedLoopModel model(*problem.plant, policy);
  const int k = static_cast<int>(problem.constraints.c_fns.size());

  RolloutResult res;
  res.cf_values.resize(k, problem.horizon + 1);
  res.prediction.per_step.reserve(problem.horizon + 1);
  res.prediction.step_moments.reserve(problem.horizon + 1);
  res.prediction.per_step.push_back(generate_ut_points(x0, problem.ut_k));
  res.prediction.step_moments.push_back(sample_moments(res.prediction.per_step.back()));
  res.cf_values.col(0) = confidence_values(res.prediction.per_step.back(), problem.constraints);

  double reward = 0.0, reward_c = 0.0;
  for (int tau = 0; tau < problem.horizon; ++tau) {
    SigmaSet expanded;
    try {
      expanded = expand_sigma_points(res.prediction.per_step.back(), model, tau, problem.ut_k);
      for (int j = 0; j < expanded.size(); ++j) {
        const Eigen::VectorXd u = policy(expanded.points.col(j), tau);
        KahanVectorSum::add_scalar(reward, reward_c,
                                   expanded.weights[j] *
                                       problem.reward(expanded.points.col(j), u, tau));
      }
    } catch (const QpInfeasibleError& e) {
      throw PolicyDomainError(std::string("rollout: policy failed at step ") +
                              std::to_string(tau) + ": " + e.what());
    } catch (const CoincidentAgentsError& e) {
      throw PolicyDomainError(std::string("rollout: policy failed at step ") +
                              std::to_string(tau) + ": " + e.what());
    }
    res.prediction.per_step.push_back(compress_sigma_points(expanded, problem.ut_k));
    res.prediction.step_moments.push_back(sample_moments(res.prediction.per_step.back()));
    res.cf_values.col(tau + 1) =
        confidence_values(res.prediction.per_step.back(), problem.constraints);
  }
  res.expected_reward = reward + reward_c;
  return res;
}

RolloutGradient rollout_gradient(const RolloutProblem& problem, const Eigen::VectorXd& theta,
                                 const GaussianMoments& x0, double fd_step) {
  RolloutGradient grad;
  grad.base = rollout(problem, theta, x0);
  const int kappa = static_cast<int>(theta.size());
  const int k = static_cast<int>(problem.constraints.c_fns.size());
  grad.reward_grad.resize(kappa);
  grad.cf_grads.assign(k, Eigen::MatrixXd(kappa, problem.horizon + 1));

  for (int j = 0; j < kappa; ++j) {
    Eigen::VectorXd hi = theta, lo = theta;
    hi[j] += fd_step;
    lo[j] -= fd_step;
    const RolloutResult rhi = rollout(problem, hi, x0);
    const RolloutResult rlo = rollout(problem, lo, x0);
    grad.reward_grad[j] = (rhi.expected_reward - rlo.expected_reward) / (2.0 * fd_step);
    for (int i = 0; i < k; ++i) {
      grad.cf_grads[i].row(j) = (rhi.cf_values.row(i) - rlo.cf_values.row(i)) / (2.0 * fd_step);
    }
  }
  if (!grad.reward_grad.allFinite()) {
    throw NonFiniteGradientError("rollout_gradient: non-finite reward gradient");
  }
  for (const auto& m : grad.cf_grads) {
    if (!m.allFinite()) {
      throw NonFiniteGradientError("rollout_gradient: non-finite constraint gradient");
    }
  }
  return grad;
}

}  // namespace foresee
