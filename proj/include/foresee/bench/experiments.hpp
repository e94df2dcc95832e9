#pragma once

#include <string>
#include <vector>

#include "foresee/bench/config.hpp"

namespace foresee::bench {

// One moment-trace experiment on the cos/sin model: expansion-compression,
// expansion-only, Monte Carlo at {500, 5000, 50000} with seeded repetitions,
// and the successive-Gaussian baseline. Writes traces, timing, and a summary
// of errors against the pooled MC-50k reference into cfg.out_dir.
struct PredictSummary {
  // Indexed by step 1..horizon (entry 0 is step 1).
  std::vector<double> ec_mean_err;
  std::vector<double> sg_mean_err;
  std::vector<bool> ec_inside_band;    // against the 5000-particle band
  std::vector<double> ec_step_ns;      // median per-step wall time
  std::vector<double> eonly_step_ns;   // per-step wall time, expansion only
  double mc50k_step_ns = 0.0;          // median per-step wall time
};
PredictSummary run_predict_benchmark(const ExperimentConfig& cfg);

struct GammaSummary {
  std::vector<double> ec_mean;       // per step 0..horizon
  std::vector<double> ec_var;
  std::vector<double> mc_mean_avg;   // across repetitions
  std::vector<double> mc_mean_sd;
  std::vector<double> mc_var_avg;
  std::vector<double> mc_var_sd;
  std::vector<double> mc_skew_avg;
};
GammaSummary run_gamma_benchmark(const ExperimentConfig& cfg);

struct UnicycleCaseSummary {
  bool converged = false;
  int iterations = 0;
  double min_cf = 0.0;                      // over all steps of the final rollout
  std::vector<double> empirical_satisfaction;  // per step 0..H from MC validation
  double final_reward = 0.0;
};
struct UnicycleSummary {
  UnicycleCaseSummary expectation;  // E[c] >= 0
  UnicycleCaseSummary ci;           // E[c] - 2 sqrt(Var[c]) >= 0
};
UnicycleSummary run_unicycle_trajopt(const ExperimentConfig& cfg);

struct LfModeSummary {
  std::string mode;  // "unbounded_fixed", "unbounded_adaptive", "bounded_fixed", "bounded_adaptive"
  int trials = 0;
  int completed = 0;
  std::vector<int> first_infeasible_step;  // per trial, -1 when completed
  std::vector<double> cumulative_reward;   // per trial
  std::vector<double> min_h1, min_h2, min_h3;
};
struct LfSummary {
  LfModeSummary unbounded_fixed, unbounded_adaptive, bounded_fixed, bounded_adaptive;
};
LfSummary run_leader_follower(const ExperimentConfig& cfg);

// Reruns the moment-identity checks and byte-compares two runs of every
// experiment (timing files excluded). Returns 0 on success, 4 on mismatch.
int run_selftest(const ExperimentConfig& cfg);

}  // namespace foresee::bench
