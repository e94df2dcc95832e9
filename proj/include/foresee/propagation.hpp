#pragma once

#include <vector>

#include "foresee/stochastic_model.hpp"
#include "foresee/types.hpp"

namespace foresee {

// Multi-step prediction: one sigma set and its sample moments per step, index
// 0 being the initial set.
struct HorizonPrediction {
  std::vector<SigmaSet> per_step;
  std::vector<GaussianMoments> step_moments;
};

// Maps every sigma point through the conditional distribution, replacing it
// with a child UT set whose weights are scaled by the parent weight. The
// output has N*(2n+1) points; its sample mean and covariance equal the
// iterated-expectation / total-variance moments of the one-step-ahead
// distribution.
SigmaSet expand_sigma_points(const SigmaSet& s, const StochasticModel& model, int step = 0,
                             double k = 1.0);

// Replaces a set by the 2n+1-point UT set with the same sample mean and
// covariance.
SigmaSet compress_sigma_points(const SigmaSet& s, double k = 1.0);

// Alternating expand/compress over H steps starting from the UT set of
// x0_moments. NotPsdError is rethrown with the failing step index attached.
HorizonPrediction predict_horizon(const GaussianMoments& x0_moments, const StochasticModel& model,
                                  int horizon, double k = 1.0);

// Expansion without compression; the set grows as (2n+1)^(tau+1), so the
// horizon is capped at 6. Benchmark fixture only.
HorizonPrediction predict_horizon_expansion_only(const GaussianMoments& x0_moments,
                                                 const StochasticModel& model, int horizon,
                                                 double k = 1.0);

// Particle-based reference: each particle advances through model.sample with
// an RngStream keyed on (seed, particle, step), so results are bitwise
// reproducible and independent of any parallel scheduling. Returns H+1
// matrices of shape n x num_particles (step 0 holds copies of x0).
std::vector<Eigen::MatrixXd> monte_carlo_propagate(const Eigen::VectorXd& x0,
                                                   const StochasticModel& model, int horizon,
                                                   int num_particles, std::uint64_t seed);

// First-order moment recursion: mu <- mean(D(mu)), Sigma <- J Sigma J^T +
// cov(D(mu)) with J the central-difference Jacobian of the conditional mean.
std::vector<GaussianMoments> successive_gaussian_propagate(const GaussianMoments& x0_moments,
                                                           const StochasticModel& model,
                                                           int horizon);

}  // namespace foresee
