#include "foresee/bench/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "foresee/errors.hpp"

namespace foresee::bench {

namespace {

struct Field {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, int line)> set;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "' expects a number, got '" + s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "' expects an integer, got '" + s + "'");
  }
}

void check_range(bool ok, const std::string& key, int line, const std::string& what) {
  if (!ok) {
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key + "' " + what);
  }
}

using Schema = std::map<std::string, Field>;

Field double_field(double ExperimentConfig::* member, const std::string& key,
                   std::function<bool(double)> valid, const std::string& what) {
  return Field{
      [member](const ExperimentConfig& c) { return fmt_double(c.*member); },
      [member, key, valid = std::move(valid), what](ExperimentConfig& c, const std::string& v,
                                                    int line) {
        const double x = parse_double(v, key, line);
        check_range(valid(x), key, line, what);
        c.*member = x;
      }};
}

Field int_field(int ExperimentConfig::* member, const std::string& key,
                std::function<bool(long long)> valid, const std::string& what) {
  return Field{
      [member](const ExperimentConfig& c) { return std::to_string(c.*member); },
      [member, key, valid = std::move(valid), what](ExperimentConfig& c, const std::string& v,
                                                    int line) {
        const long long x = parse_int(v, key, line);
        check_range(valid(x), key, line, what);
        c.*member = static_cast<int>(x);
      }};
}

const auto positive = [](double x) { return x > 0.0; };
const auto positive_int = [](long long x) { return x > 0; };
const auto any_double = [](double) { return true; };

Schema build_schema() {
  Schema s;
  s["experiment.id"] = Field{[](const ExperimentConfig& c) { return c.id; },
                             [](ExperimentConfig& c, const std::string& v, int line) {
                               if (!c.id.empty() && v != c.id) {
                                 throw ConfigError("config line " + std::to_string(line) +
                                                   ": id '" + v + "' does not match the '" +
                                                   c.id + "' subcommand");
                               }
                               c.id = v;
                             }};
  s["experiment.seed"] =
      Field{[](const ExperimentConfig& c) { return std::to_string(c.seed); },
            [](ExperimentConfig& c, const std::string& v, int line) {
              const long long x = parse_int(v, "seed", line);
              check_range(x >= 0, "seed", line, "must be nonnegative");
              c.seed = static_cast<std::uint64_t>(x);
            }};
  s["experiment.num_trials"] =
      int_field(&ExperimentConfig::num_trials, "num_trials", positive_int, "must be positive");
  s["experiment.out_dir"] = Field{[](const ExperimentConfig& c) { return c.out_dir; },
                                  [](ExperimentConfig& c, const std::string& v, int) {
                                    c.out_dir = v;
                                  }};

  s["ut.k"] = double_field(&ExperimentConfig::ut_k, "k", positive, "must be positive");

  s["prediction.horizon"] =
      int_field(&ExperimentConfig::horizon, "horizon", positive_int, "must be positive");
  s["prediction.dt"] = double_field(&ExperimentConfig::dt, "dt", positive, "must be positive");
  s["prediction.mc_particles"] = int_field(&ExperimentConfig::mc_particles, "mc_particles",
                                           positive_int, "must be positive");
  s["prediction.mc_repetitions"] = int_field(&ExperimentConfig::mc_repetitions, "mc_repetitions",
                                             positive_int, "must be positive");
  s["prediction.expansion_only_horizon"] =
      int_field(&ExperimentConfig::expansion_only_horizon, "expansion_only_horizon",
                [](long long x) { return x >= 1 && x <= 6; }, "must be in [1, 6]");
  s["prediction.x0_1"] = double_field(&ExperimentConfig::x0_1, "x0_1", any_double, "");
  s["prediction.x0_2"] = double_field(&ExperimentConfig::x0_2, "x0_2", any_double, "");

  s["model.cossin_a"] = double_field(&ExperimentConfig::cossin_a, "cossin_a", any_double, "");
  s["model.gamma_shape_offset"] =
      double_field(&ExperimentConfig::gamma_shape_offset, "gamma_shape_offset", positive,
                   "must be positive");
  s["model.gamma_scale"] =
      double_field(&ExperimentConfig::gamma_scale, "gamma_scale", positive, "must be positive");
  s["model.gamma_x0"] = double_field(&ExperimentConfig::gamma_x0, "gamma_x0", any_double, "");

  s["constraint.epsilon"] =
      double_field(&ExperimentConfig::epsilon, "epsilon",
                   [](double x) { return x > 0.0 && x <= 1.0; }, "must be in (0, 1]");
  s["constraint.ci_factor"] = double_field(&ExperimentConfig::ci_factor, "ci_factor",
                                           [](double x) { return x >= 0.0; },
                                           "must be nonnegative");

  s["optimizer.learning_rate"] =
      double_field(&ExperimentConfig::learning_rate, "learning_rate",
                   [](double x) { return x > 0.0 && x <= 1.0; }, "must be in (0, 1]");
  s["optimizer.trust_radius"] = double_field(&ExperimentConfig::trust_radius, "trust_radius",
                                             positive, "must be positive");
  s["optimizer.max_iterations"] = int_field(&ExperimentConfig::max_iterations, "max_iterations",
                                            positive_int, "must be positive");
  s["optimizer.tolerance"] =
      double_field(&ExperimentConfig::tolerance, "tolerance", positive, "must be positive");
  s["optimizer.fd_step"] =
      double_field(&ExperimentConfig::fd_step, "fd_step", positive, "must be positive");

  s["unicycle.start_x"] = double_field(&ExperimentConfig::uni_start_x, "start_x", any_double, "");
  s["unicycle.start_y"] = double_field(&ExperimentConfig::uni_start_y, "start_y", any_double, "");
  s["unicycle.start_psi"] =
      double_field(&ExperimentConfig::uni_start_psi, "start_psi", any_double, "");
  s["unicycle.start_v"] = double_field(&ExperimentConfig::uni_start_v, "start_v", any_double, "");
  s["unicycle.goal_x"] = double_field(&ExperimentConfig::uni_goal_x, "goal_x", any_double, "");
  s["unicycle.goal_y"] = double_field(&ExperimentConfig::uni_goal_y, "goal_y", any_double, "");
  s["unicycle.obstacle_x"] =
      double_field(&ExperimentConfig::uni_obstacle_x, "obstacle_x", any_double, "");
  s["unicycle.obstacle_y"] =
      double_field(&ExperimentConfig::uni_obstacle_y, "obstacle_y", any_double, "");
  s["unicycle.obstacle_radius"] = double_field(&ExperimentConfig::uni_obstacle_radius,
                                               "obstacle_radius", positive, "must be positive");
  s["unicycle.horizon"] =
      int_field(&ExperimentConfig::uni_horizon, "horizon", positive_int, "must be positive");
  s["unicycle.mc_particles"] = int_field(&ExperimentConfig::uni_mc_particles, "mc_particles",
                                         positive_int, "must be positive");

  s["leader_follower.s_min"] =
      double_field(&ExperimentConfig::lf_s_min, "s_min", positive, "must be positive");
  s["leader_follower.s_max"] =
      double_field(&ExperimentConfig::lf_s_max, "s_max", positive, "must be positive");
  s["leader_follower.fov_half_angle"] =
      double_field(&ExperimentConfig::lf_fov_half_angle, "fov_half_angle", positive,
                   "must be positive");
  s["leader_follower.u_max"] =
      double_field(&ExperimentConfig::lf_u_max, "u_max", positive, "must be positive");
  s["leader_follower.omega_max"] =
      double_field(&ExperimentConfig::lf_omega_max, "omega_max", positive, "must be positive");
  s["leader_follower.episode_seconds"] =
      double_field(&ExperimentConfig::lf_episode_seconds, "episode_seconds", positive,
                   "must be positive");
  s["leader_follower.control_hz"] = double_field(&ExperimentConfig::lf_control_hz, "control_hz",
                                                 positive, "must be positive");
  s["leader_follower.pred_horizon"] = int_field(&ExperimentConfig::lf_pred_horizon,
                                                "pred_horizon", positive_int, "must be positive");
  s["leader_follower.q_slack"] =
      double_field(&ExperimentConfig::lf_q_slack, "q_slack", positive, "must be positive");
  s["leader_follower.alpha_clf_init"] =
      double_field(&ExperimentConfig::lf_alpha_clf_init, "alpha_clf_init",
                   [](double x) { return x > 0.0 && x < 1.0; }, "must be in (0, 1)");
  s["leader_follower.alpha_cbf_init"] =
      double_field(&ExperimentConfig::lf_alpha_cbf_init, "alpha_cbf_init",
                   [](double x) { return x > 0.0 && x < 1.0; }, "must be in (0, 1)");
  s["leader_follower.sqp_iters"] =
      int_field(&ExperimentConfig::lf_sqp_iters, "sqp_iters", positive_int, "must be positive");
  s["leader_follower.leader_x0"] =
      double_field(&ExperimentConfig::lf_leader_x0, "leader_x0", any_double, "");
  s["leader_follower.leader_y0"] =
      double_field(&ExperimentConfig::lf_leader_y0, "leader_y0", any_double, "");
  s["leader_follower.follower_x0"] =
      double_field(&ExperimentConfig::lf_follower_x0, "follower_x0", any_double, "");
  s["leader_follower.follower_y0"] =
      double_field(&ExperimentConfig::lf_follower_y0, "follower_y0", any_double, "");
  s["leader_follower.follower_phi0"] =
      double_field(&ExperimentConfig::lf_follower_phi0, "follower_phi0", any_double, "");
  s["leader_follower.track_gain_s"] =
      double_field(&ExperimentConfig::lf_track_gain_s, "track_gain_s", positive,
                   "must be positive");
  s["leader_follower.track_gain_phi"] =
      double_field(&ExperimentConfig::lf_track_gain_phi, "track_gain_phi", positive,
                   "must be positive");
  return s;
}

const Schema& schema() {
  static const Schema s = build_schema();
  return s;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& experiment_id) {
  ExperimentConfig cfg;
  cfg.id = experiment_id;

  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = schema().find(full);
    if (it == schema().end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + full + "'");
    }
    it->second.set(cfg, value, line_no);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment_id) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), experiment_id);
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const auto& [full, field] : schema()) {
    const std::size_t dot = full.find('.');
    const std::string sec = full.substr(0, dot);
    const std::string key = full.substr(dot + 1);
    if (sec != section) {
      if (!section.empty()) out << "\n";
      out << "[" << sec << "]\n";
      section = sec;
    }
    out << key << " = " << field.get(cfg) << "\n";
  }
  return out.str();
}

}  // namespace foresee::bench
