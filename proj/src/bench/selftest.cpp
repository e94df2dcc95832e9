#include <cstdio>
#include <filesystem>
#include <iostream>

#include "foresee/bench/csv.hpp"
#include "foresee/bench/experiments.hpp"
#include "foresee/models.hpp"
#include "foresee/propagation.hpp"
#include "foresee/rng.hpp"
#include "foresee/unscented.hpp"

namespace foresee::bench {

namespace {

bool check(bool ok, const std::string& what) {
  std::printf("[%s] selftest: %s\n", ok ? "PASS" : "FAIL", what.c_str());
  return ok;
}

bool moment_roundtrip_check() {
  RngStream rng(5001);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 6);
    Eigen::VectorXd mean(n);
    for (int i = 0; i < n; ++i) mean[i] = 3.0 * rng.next_gaussian();
    Eigen::MatrixXd a(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) a(i, j) = rng.next_gaussian();
    const GaussianMoments m{mean, a * a.transpose()};
    const SigmaSet s = generate_ut_points(m, 1.0);
    worst = std::max(worst, (sample_mean(s) - m.mean).cwiseAbs().maxCoeff());
    worst = std::max(worst, (sample_cov(s) - m.cov).cwiseAbs().maxCoeff());
  }
  return check(worst < 1e-10, "sigma-point round trip within 1e-10");
}

bool expansion_identity_check() {
  RngStream rng(5002);
  Eigen::MatrixXd amat(3, 3), b(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      amat(i, j) = 0.5 * rng.next_gaussian();
      b(i, j) = 0.3 * rng.next_gaussian();
    }
  const LinearGaussianModel model(amat, b * b.transpose());
  double worst_expand = 0.0, worst_compress = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int count = 3 + static_cast<int>(rng.next_u64() % 12);
    SigmaSet s;
    s.points.resize(3, count);
    s.weights.resize(count);
    double wsum = 0.0;
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < 3; ++j) s.points(j, i) = 2.0 * rng.next_gaussian();
      s.weights[i] = 0.1 + rng.next_uniform();
      wsum += s.weights[i];
    }
    s.weights /= wsum;
    s.weights[0] += 1.0 - s.weights.sum();

    const SigmaSet expanded = expand_sigma_points(s, model);
    const Eigen::VectorXd want_mean = model.a() * sample_mean(s);
    const Eigen::MatrixXd want_cov =
        model.a() * sample_cov(s) * model.a().transpose() + model.q();
    worst_expand =
        std::max(worst_expand, (sample_mean(expanded) - want_mean).cwiseAbs().maxCoeff());
    worst_expand =
        std::max(worst_expand, (sample_cov(expanded) - want_cov).cwiseAbs().maxCoeff());

    const SigmaSet compressed = compress_sigma_points(expanded);
    worst_compress = std::max(
        worst_compress, (sample_mean(compressed) - sample_mean(expanded)).cwiseAbs().maxCoeff());
    worst_compress = std::max(
        worst_compress, (sample_cov(compressed) - sample_cov(expanded)).cwiseAbs().maxCoeff());
  }
  const bool ok1 = check(worst_expand < 1e-8, "expansion matches the moment identities (1e-8)");
  const bool ok2 = check(worst_compress < 1e-9, "compression preserves moments (1e-9)");
  return ok1 && ok2;
}

// Byte-compare every non-timing file of two directories.
bool directories_match(const std::string& a, const std::string& b) {
  namespace fs = std::filesystem;
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    if (name.find("timing") != std::string::npos) continue;
    names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  for (const std::string& name : names) {
    if (!fs::exists(fs::path(b) / name)) return false;
    if (read_text_file(a + "/" + name) != read_text_file(b + "/" + name)) return false;
  }
  return !names.empty();
}

bool rerun_matches(const ExperimentConfig& base, const std::string& id) {
  ExperimentConfig cfg = base;
  cfg.id = id;

  // Reduced sizes: determinism does not depend on scale.
  cfg.horizon = 3;
  cfg.mc_particles = 2000;
  cfg.mc_repetitions = 3;
  cfg.max_iterations = 8;
  cfg.uni_horizon = 10;
  cfg.uni_mc_particles = 2000;
  cfg.num_trials = 2;
  cfg.lf_episode_seconds = 1.0;
  cfg.lf_sqp_iters = 1;

  const std::string dir_a = base.out_dir + "/selftest/" + id + "_a";
  const std::string dir_b = base.out_dir + "/selftest/" + id + "_b";
  for (const std::string& dir : {dir_a, dir_b}) {
    std::filesystem::remove_all(dir);
    ensure_directory(dir);
    cfg.out_dir = dir;
    if (id == "predict-benchmark") run_predict_benchmark(cfg);
    if (id == "gamma-benchmark") run_gamma_benchmark(cfg);
    if (id == "unicycle-trajopt") run_unicycle_trajopt(cfg);
    if (id == "leader-follower") run_leader_follower(cfg);
  }
  return check(directories_match(dir_a, dir_b), id + " reruns byte-identically");
}

}  // namespace

int run_selftest(const ExperimentConfig& cfg) {
  ensure_directory(cfg.out_dir);
  bool ok = true;
  ok &= moment_roundtrip_check();
  ok &= expansion_identity_check();
  ok &= rerun_matches(cfg, "predict-benchmark");
  ok &= rerun_matches(cfg, "gamma-benchmark");
  ok &= rerun_matches(cfg, "unicycle-trajopt");
  ok &= rerun_matches(cfg, "leader-follower");
  return ok ? 0 : 4;
}

}  // namespace foresee::bench
