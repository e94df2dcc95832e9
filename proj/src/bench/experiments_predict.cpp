#include <chrono>
#include <cmath>

#include "foresee/bench/csv.hpp"
#include "foresee/bench/experiments.hpp"
#include "foresee/models.hpp"
#include "foresee/propagation.hpp"
#include "foresee/rng.hpp"
#include "foresee/threads.hpp"
#include "foresee/unscented.hpp"

namespace foresee::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point t0, Clock::time_point t1, int reps) {
  return std::chrono::duration<double, std::nano>(t1 - t0).count() / reps;
}

std::vector<std::string> trace_columns(int n) {
  std::vector<std::string> cols = {"step"};
  for (int i = 0; i < n; ++i) cols.push_back("mean_" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cols.push_back("cov_" + std::to_string(i) + std::to_string(j));
  for (int i = 0; i < n; ++i) cols.push_back("skew_" + std::to_string(i));
  for (int i = 0; i < n; ++i) cols.push_back("kurt_" + std::to_string(i));
  return cols;
}

void write_trace_row(CsvWriter& csv, int step, const SigmaSet& set) {
  const int n = set.dim();
  const GaussianMoments m = sample_moments(set);
  std::vector<double> row;
  row.push_back(step);
  for (int i = 0; i < n; ++i) row.push_back(m.mean[i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) row.push_back(m.cov(i, j));
  try {
    const HigherMoments hm = sample_higher_moments(set);
    for (int i = 0; i < n; ++i) row.push_back(hm.skewness[i]);
    for (int i = 0; i < n; ++i) row.push_back(hm.kurtosis[i]);
  } catch (const DegenerateVarianceError&) {
    for (int i = 0; i < 2 * n; ++i) row.push_back(std::nan(""));
  }
  csv.write_row(row);
}

struct McStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::VectorXd skew, kurt;
};

McStats particle_stats(const Eigen::MatrixXd& particles) {
  const int n = static_cast<int>(particles.rows());
  const int p = static_cast<int>(particles.cols());
  McStats st;
  st.mean = particles.rowwise().mean();
  const Eigen::MatrixXd centered = particles.colwise() - st.mean;
  st.cov = centered * centered.transpose() / p;
  st.skew.resize(n);
  st.kurt.resize(n);
  for (int i = 0; i < n; ++i) {
    const double var = st.cov(i, i);
    if (var <= 1e-12) {
      st.skew[i] = std::nan("");
      st.kurt[i] = std::nan("");
      continue;
    }
    double m3 = 0.0, m4 = 0.0;
    for (int j = 0; j < p; ++j) {
      const double d = centered(i, j);
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
    m3 /= p;
    m4 /= p;
    st.skew[i] = m3 / std::pow(var, 1.5);
    st.kurt[i] = m4 / (var * var);
  }
  return st;
}

}  // namespace

PredictSummary run_predict_benchmark(const ExperimentConfig& cfg) {
  ensure_directory(cfg.out_dir);
  write_text_file(cfg.out_dir + "/config_effective.ini", render_config(cfg));

  const CosSinBenchmark model(cfg.cossin_a);
  const Eigen::Vector2d x0(cfg.x0_1, cfg.x0_2);
  const GaussianMoments x0m{x0, Eigen::Matrix2d::Zero()};
  const int horizon = cfg.horizon;
  const double k = cfg.ut_k;

  PredictSummary summary;
  CsvWriter timing(cfg.out_dir + "/timing.csv", {"method", "step", "ns_per_step"});

  // Expansion-compression, stepwise, with repeated timing per step.
  std::vector<GaussianMoments> ec_moments;
  {
    CsvWriter csv(cfg.out_dir + "/ec_trace.csv", trace_columns(2));
    SigmaSet set = generate_ut_points(x0m, k);
    write_trace_row(csv, 0, set);
    ec_moments.push_back(sample_moments(set));
    for (int tau = 0; tau < horizon; ++tau) {
      constexpr int reps = 20;
      SigmaSet next;
      const auto t0 = Clock::now();
      for (int r = 0; r < reps; ++r) next = compress_sigma_points(expand_sigma_points(set, model, tau, k), k);
      const auto t1 = Clock::now();
      const double ns = elapsed_ns(t0, t1, reps);
      summary.ec_step_ns.push_back(ns);
      timing.write_row_raw({"ec", std::to_string(tau + 1), CsvWriter::format(ns)});
      set = std::move(next);
      write_trace_row(csv, tau + 1, set);
      ec_moments.push_back(sample_moments(set));
    }
  }

  // Expansion only (fixture; grows geometrically).
  {
    CsvWriter csv(cfg.out_dir + "/eonly_trace.csv", trace_columns(2));
    SigmaSet set = generate_ut_points(x0m, k);
    write_trace_row(csv, 0, set);
    const int e_horizon = std::min(cfg.expansion_only_horizon, 6);
    for (int tau = 0; tau < e_horizon; ++tau) {
      const int reps = set.size() > 1000 ? 3 : 10;
      SigmaSet next;
      const auto t0 = Clock::now();
      for (int r = 0; r < reps; ++r) next = expand_sigma_points(set, model, tau, k);
      const auto t1 = Clock::now();
      const double ns = elapsed_ns(t0, t1, reps);
      summary.eonly_step_ns.push_back(ns);
      timing.write_row_raw({"eonly", std::to_string(tau + 1), CsvWriter::format(ns)});
      set = std::move(next);
      write_trace_row(csv, tau + 1, set);
    }
  }

  // Successive-Gaussian baseline.
  std::vector<GaussianMoments> sg;
  {
    CsvWriter csv(cfg.out_dir + "/sg_trace.csv", trace_columns(2));
    sg = successive_gaussian_propagate(x0m, model, horizon);
    for (int tau = 0; tau <= horizon; ++tau) {
      std::vector<double> row = {double(tau)};
      for (int i = 0; i < 2; ++i) row.push_back(sg[tau].mean[i]);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) row.push_back(sg[tau].cov(i, j));
      for (int i = 0; i < 4; ++i) row.push_back(std::nan(""));  // not tracked by the baseline
      csv.write_row(row);
    }
  }

  // Monte Carlo with seeded repetitions.
  const std::vector<int> particle_counts = {500, 5000, cfg.mc_particles};
  std::vector<std::vector<Eigen::VectorXd>> mc5000_means(horizon + 1);  // [step][rep]
  std::vector<Eigen::VectorXd> ref_mean(horizon + 1, Eigen::Vector2d::Zero());
  std::vector<Eigen::MatrixXd> ref_cov(horizon + 1, Eigen::Matrix2d::Zero());
  {
    CsvWriter csv(cfg.out_dir + "/mc_trace.csv", [] {
      std::vector<std::string> cols = {"particles", "rep"};
      const auto base = trace_columns(2);
      cols.insert(cols.end(), base.begin(), base.end());
      return cols;
    }());
    for (int count : particle_counts) {
      for (int rep = 0; rep < cfg.mc_repetitions; ++rep) {
        const std::uint64_t rep_seed = RngStream(cfg.seed, count, rep).next_u64();
        std::vector<Eigen::MatrixXd> steps;
        if (count == cfg.mc_particles && rep == 0) {
          // Time the largest run once, step by step.
          steps.assign(horizon + 1, Eigen::MatrixXd(2, count));
          steps[0] = x0.replicate(1, count);
          double total_ns = 0.0;
          for (int tau = 0; tau < horizon; ++tau) {
            const auto t0 = Clock::now();
            parallel_for(count, [&](int p) {
              RngStream rng(rep_seed, static_cast<std::uint64_t>(p),
                            static_cast<std::uint64_t>(tau));
              steps[tau + 1].col(p) = model.sample(steps[tau].col(p), tau, rng);
            });
            const auto t1 = Clock::now();
            const double ns = elapsed_ns(t0, t1, 1);
            total_ns += ns;
            timing.write_row_raw(
                {"mc" + std::to_string(count), std::to_string(tau + 1), CsvWriter::format(ns)});
          }
          summary.mc50k_step_ns = total_ns / horizon;
        } else {
          steps = monte_carlo_propagate(x0, model, horizon, count, rep_seed);
        }
        for (int tau = 0; tau <= horizon; ++tau) {
          const McStats st = particle_stats(steps[tau]);
          std::vector<double> row = {double(count), double(rep), double(tau)};
          for (int i = 0; i < 2; ++i) row.push_back(st.mean[i]);
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) row.push_back(st.cov(i, j));
          for (int i = 0; i < 2; ++i) row.push_back(st.skew[i]);
          for (int i = 0; i < 2; ++i) row.push_back(st.kurt[i]);
          csv.write_row(row);
          if (count == 5000) mc5000_means[tau].push_back(st.mean);
          if (count == cfg.mc_particles) {
            ref_mean[tau] += st.mean / cfg.mc_repetitions;
            ref_cov[tau] += st.cov / cfg.mc_repetitions;
          }
        }
      }
    }
  }

  // Summary: per-method errors against the pooled MC reference, plus the
  // 2-standard-error band membership of the EC mean among the 5000-particle
  // repetition means.
  {
    CsvWriter csv(cfg.out_dir + "/summary.csv",
                  {"method", "step", "mean_err", "cov_err", "inside_band"});
    for (int tau = 1; tau <= horizon; ++tau) {
      Eigen::Vector2d band_avg = Eigen::Vector2d::Zero();
      for (const auto& m : mc5000_means[tau]) band_avg += m;
      band_avg /= double(mc5000_means[tau].size());
      Eigen::Vector2d band_sd = Eigen::Vector2d::Zero();
      for (const auto& m : mc5000_means[tau]) {
        band_sd += (m - band_avg).cwiseProduct(m - band_avg);
      }
      band_sd = (band_sd / double(mc5000_means[tau].size() - 1)).cwiseSqrt();

      const double ec_err = (ec_moments[tau].mean - ref_mean[tau]).norm();
      const double ec_cov_err = (ec_moments[tau].cov - ref_cov[tau]).norm();
      bool inside = true;
      for (int i = 0; i < 2; ++i) {
        if (std::abs(ec_moments[tau].mean[i] - band_avg[i]) > 2.0 * band_sd[i]) inside = false;
      }
      summary.ec_mean_err.push_back(ec_err);
      summary.ec_inside_band.push_back(inside);
      csv.write_row_raw({"ec", std::to_string(tau), CsvWriter::format(ec_err),
                         CsvWriter::format(ec_cov_err), inside ? "1" : "0"});

      const double sg_err = (sg[tau].mean - ref_mean[tau]).norm();
      const double sg_cov_err = (sg[tau].cov - ref_cov[tau]).norm();
      summary.sg_mean_err.push_back(sg_err);
      csv.write_row_raw({"sg", std::to_string(tau), CsvWriter::format(sg_err),
                         CsvWriter::format(sg_cov_err), ""});
    }
  }
  return summary;
}

}  // namespace foresee::bench
