#include "foresee/propagation.hpp"

#include <stdexcept>
#include <string>

#include "foresee/errors.hpp"
#include "foresee/threads.hpp"
#include "foresee/unscented.hpp"

namespace foresee {

SigmaSet expand_sigma_points(const SigmaSet& s, const StochasticModel& model, int step, double k) {
  s.validate();
  const int n = s.dim();
  if (model.state_dim() != n) {
    throw std::invalid_argument("expand_sigma_points: model dimension mismatch");
  }
  const int child_count = 2 * n + 1;
  SigmaSet out;
  out.points.resize(n, s.size() * child_count);
  out.weights.resize(s.size() * child_count);
  for (int i = 0; i < s.size(); ++i) {
    const SigmaSet child = generate_ut_points(model.conditional_moments(s.points.col(i), step), k);
    out.points.middleCols(i * child_count, child_count) = child.points;
    out.weights.segment(i * child_count, child_count) = s.weights[i] * child.weights;
  }
  return out;
}

SigmaSet compress_sigma_points(const SigmaSet& s, double k) {
  s.validate();
  return generate_ut_points(sample_moments(s), k);
}

namespace {

HorizonPrediction predict_impl(const GaussianMoments& x0_moments, const StochasticModel& model,
                               int horizon, double k, bool compress) {
  if (horizon < 1) throw std::invalid_argument("predict_horizon: horizon must be >= 1");
  HorizonPrediction pred;
  pred.per_step.reserve(horizon + 1);
  pred.step_moments.reserve(horizon + 1);
  pred.per_step.push_back(generate_ut_points(x0_moments, k));
  pred.step_moments.push_back(sample_moments(pred.per_step.back()));
  for (int tau = 0; tau < horizon; ++tau) {
    try {
      SigmaSet expanded = expand_sigma_points(pred.per_step.back(), model, tau, k);
      pred.per_step.push_back(compress ? compress_sigma_points(expanded, k) : std::move(expanded));
    } catch (const NotPsdError& e) {
      throw NotPsdError(std::string(e.what()) + " (at prediction step " + std::to_string(tau + 1) +
                        ")");
    }
    pred.step_moments.push_back(sample_moments(pred.per_step.back()));
  }
  return pred;
}

}  // namespace

HorizonPrediction predict_horizon(const GaussianMoments& x0_moments, const StochasticModel& model,
                                  int horizon, double k) {
  return predict_impl(x0_moments, model, horizon, k, true);
}

HorizonPrediction predict_horizon_expansion_only(const GaussianMoments& x0_moments,
                                                 const StochasticModel& model, int horizon,
                                                 double k) {
  if (horizon > 6) {
    throw std::invalid_argument("expansion-only prediction is capped at horizon 6");
  }
  return predict_impl(x0_moments, model, horizon, k, false);
}

std::vector<Eigen::MatrixXd> monte_carlo_propagate(const Eigen::VectorXd& x0,
                                                   const StochasticModel& model, int horizon,
                                                   int num_particles, std::uint64_t seed) {
  if (num_particles < 1) throw std::invalid_argument("monte_carlo_propagate: need >= 1 particle");
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::MatrixXd> steps(horizon + 1, Eigen::MatrixXd(n, num_particles));
  steps[0] = x0.replicate(1, num_particles);
  for (int tau = 0; tau < horizon; ++tau) {
    parallel_for(num_particles, [&](int p) {
      RngStream rng(seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(tau));
      steps[tau + 1].col(p) = model.sample(steps[tau].col(p), tau, rng);
    });
  }
  return steps;
}

std::vector<GaussianMoments> successive_gaussian_propagate(const GaussianMoments& x0_moments,
                                                           const StochasticModel& model,
                                                           int horizon) {
  const int n = x0_moments.dim();
  std::vector<GaussianMoments> out;
  out.reserve(horizon + 1);
  out.push_back(x0_moments);
  for (int tau = 0; tau < horizon; ++tau) {
    const Eigen::VectorXd& mu = out.back().mean;
    const GaussianMoments local = model.conditional_moments(mu, tau);
    Eigen::MatrixXd jac(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-6 * (1.0 + std::abs(mu[j]));
      Eigen::VectorXd lo = mu, hi = mu;
      lo[j] -= h;
      hi[j] += h;
      jac.col(j) = (model.conditional_moments(hi, tau).mean -
                    model.conditional_moments(lo, tau).mean) /
                   (2.0 * h);
    }
    GaussianMoments next(local.mean, jac * out.back().cov * jac.transpose() + local.cov);
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace foresee
