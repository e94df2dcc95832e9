#pragma once

#include <cstdint>
#include <string>

namespace foresee::bench {

// Flat key = value configuration with [section] headers. Every field has a
// default; unknown sections or keys are rejected with the offending line.
struct ExperimentConfig {
  // [experiment]
  std::string id;  // set from the subcommand; a config id must match it
  std::uint64_t seed = 12345;
  int num_trials = 30;
  std::string out_dir = "out";

  // [ut]
  double ut_k = 1.0;

  // [prediction]
  int horizon = 3;
  double dt = 0.05;
  int mc_particles = 50000;
  int mc_repetitions = 20;
  int expansion_only_horizon = 3;  // capped at 6
  double x0_1 = 0.0;
  double x0_2 = 0.0;

  // [model]
  double cossin_a = 20.0;
  double gamma_shape_offset = 1.0;  // shape(x) = |x| + offset
  double gamma_scale = 1.0;
  double gamma_x0 = 1.0;

  // [constraint]
  double epsilon = 0.05;
  double ci_factor = 2.0;  // quantile factor of the unicycle CI constraint

  // [optimizer]
  double learning_rate = 0.5;
  double trust_radius = 1.0;
  int max_iterations = 500;
  double tolerance = 1e-4;  // stop when ||d||_inf * step < tolerance
  double fd_step = 1e-5;

  // [unicycle]
  double uni_start_x = -0.5;
  double uni_start_y = -0.5;
  double uni_start_psi = 0.7853981633974483;
  double uni_start_v = 0.0;
  double uni_goal_x = 2.0;
  double uni_goal_y = 2.0;
  double uni_obstacle_x = 0.75;
  double uni_obstacle_y = 0.75;
  double uni_obstacle_radius = 0.5;
  int uni_horizon = 40;
  int uni_mc_particles = 50000;

  // [leader_follower]
  double lf_s_min = 0.3;
  double lf_s_max = 2.0;
  double lf_fov_half_angle = 1.0471975511965976;
  double lf_u_max = 2.5;
  double lf_omega_max = 4.0;
  double lf_episode_seconds = 10.0;
  double lf_control_hz = 20.0;
  int lf_pred_horizon = 20;
  double lf_q_slack = 100.0;
  double lf_alpha_clf_init = 0.05;
  double lf_alpha_cbf_init = 0.1;
  int lf_sqp_iters = 2;
  double lf_leader_x0 = 0.0;
  double lf_leader_y0 = 0.0;
  double lf_follower_x0 = -1.0;
  double lf_follower_y0 = 0.0;
  double lf_follower_phi0 = 0.0;
  double lf_track_gain_s = 2.0;
  double lf_track_gain_phi = 3.0;
};

// Strict parse of `path` over the defaults. Throws ConfigError with the line
// and field on unknown keys, malformed lines, or out-of-range values.
ExperimentConfig load_config(const std::string& path, const std::string& experiment_id);

// Parses from text (the file loader and the echo round-trip share this).
ExperimentConfig parse_config(const std::string& text, const std::string& experiment_id);

// Full effective configuration, serialized so that parsing it again
// reproduces every field bit-for-bit.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace foresee::bench
