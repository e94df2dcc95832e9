#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "foresee/errors.hpp"
#include "foresee/models.hpp"
#include "foresee/propagation.hpp"
#include "foresee/unscented.hpp"

using namespace foresee;

namespace {

// Deterministic nonlinear map with zero process noise.
class DeterministicMap : public StochasticModel {
 public:
  int state_dim() const override { return 2; }
  GaussianMoments conditional_moments(const Eigen::VectorXd& x, int) const override {
    return {f(x), Eigen::Matrix2d::Zero()};
  }
  Eigen::VectorXd sample(const Eigen::VectorXd& x, int, RngStream&) const override {
    return f(x);
  }
  static Eigen::Vector2d f(const Eigen::VectorXd& x) {
    return {std::sin(x[0]), 0.5 * x[1] + 0.1};
  }
};

SigmaSet random_set(int n, int count, RngStream& rng) {
  SigmaSet s;
  s.points.resize(n, count);
  s.weights.resize(count);
  double wsum = 0.0;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < n; ++j) s.points(j, i) = 2.0 * rng.next_gaussian();
    s.weights[i] = 0.05 + rng.next_uniform();
    wsum += s.weights[i];
  }
  s.weights /= wsum;
  // Renormalize exactly enough for validate().
  s.weights[0] += 1.0 - s.weights.sum();
  return s;
}

LinearGaussianModel seeded_linear_model(int n, std::uint64_t seed) {
  RngStream rng(seed);
  Eigen::MatrixXd a(n, n), b(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      a(i, j) = 0.6 * rng.next_gaussian();
      b(i, j) = 0.4 * rng.next_gaussian();
    }
  return {a, b * b.transpose()};
}

}  // namespace

TEST_CASE("expanding a singleton under zero process noise copies the image point") {
  DeterministicMap model;
  SigmaSet s;
  s.points = Eigen::Vector2d(0.3, -0.2);
  s.weights = Eigen::VectorXd::Ones(1);
  const SigmaSet out = expand_sigma_points(s, model);
  REQUIRE(out.size() == 5);
  const Eigen::Vector2d target = DeterministicMap::f(Eigen::Vector2d(0.3, -0.2));
  for (int i = 0; i < out.size(); ++i) CHECK((out.points.col(i) - target).norm() == 0.0);
  CHECK((sample_mean(out) - target).norm() < 1e-15);
}

TEST_CASE("expansion reproduces the linear-Gaussian closed form") {
  const LinearGaussianModel model = seeded_linear_model(3, 21);
  RngStream rng(22);
  const SigmaSet s = random_set(3, 9, rng);
  const Eigen::VectorXd mu = sample_mean(s);
  const Eigen::MatrixXd sigma = sample_cov(s);
  const SigmaSet out = expand_sigma_points(s, model);
  const Eigen::VectorXd want_mean = model.a() * mu;
  const Eigen::MatrixXd want_cov = model.a() * sigma * model.a().transpose() + model.q();
  CHECK((sample_mean(out) - want_mean).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((sample_cov(out) - want_cov).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("expanding the cos/sin singleton matches direct evaluation") {
  CosSinBenchmark model(20.0);
  SigmaSet s;
  s.points = Eigen::Vector2d(0.0, 0.0);
  s.weights = Eigen::VectorXd::Ones(1);
  const SigmaSet out = expand_sigma_points(s, model);
  const Eigen::VectorXd mean = sample_mean(out);
  const Eigen::MatrixXd cov = sample_cov(out);
  CHECK(mean[0] == doctest::Approx(20.2).epsilon(1e-12));
  CHECK(mean[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(cov(0, 0) == doctest::Approx(408.05).epsilon(1e-12));
  CHECK(cov(1, 1) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(std::abs(cov(0, 1)) < 1e-10);
}

TEST_CASE("iterated-expectation and total-variance identities hold for any model") {
  CosSinBenchmark model(20.0);
  RngStream rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const SigmaSet s = random_set(2, 3 + static_cast<int>(rng.next_u64() % 10), rng);
    const SigmaSet out = expand_sigma_points(s, model);

    Eigen::Vector2d want_mean = Eigen::Vector2d::Zero();
    for (int i = 0; i < s.size(); ++i) {
      want_mean += s.weights[i] * model.conditional_moments(s.points.col(i), 0).mean;
    }
    Eigen::Matrix2d want_cov = Eigen::Matrix2d::Zero();
    for (int i = 0; i < s.size(); ++i) {
      const GaussianMoments m = model.conditional_moments(s.points.col(i), 0);
      const Eigen::Vector2d d = m.mean - want_mean;
      want_cov += s.weights[i] * (m.cov + d * d.transpose());
    }
    REQUIRE((sample_mean(out) - want_mean).cwiseAbs().maxCoeff() < 1e-8);
    REQUIRE((sample_cov(out) - want_cov).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("compression is a fixed point on fresh UT sets") {
  RngStream rng(41);
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.3, 0.3, 2.0;
  const GaussianMoments m{Eigen::Vector2d(1.0, -2.0), a * a.transpose()};
  const SigmaSet s = generate_ut_points(m, 1.0);
  const SigmaSet c = compress_sigma_points(s);
  CHECK((sample_mean(c) - sample_mean(s)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((sample_cov(c) - sample_cov(s)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("compressing the expanded linear-Gaussian set keeps the closed-form moments") {
  const LinearGaussianModel model = seeded_linear_model(2, 51);
  RngStream rng(52);
  const SigmaSet s = random_set(2, 9, rng);  // expanded: 45 points
  const SigmaSet expanded = expand_sigma_points(s, model);
  REQUIRE(expanded.size() == 45);
  const SigmaSet back = compress_sigma_points(expanded);
  REQUIRE(back.size() == 5);
  const Eigen::VectorXd want_mean = model.a() * sample_mean(s);
  const Eigen::MatrixXd want_cov =
      model.a() * sample_cov(s) * model.a().transpose() + model.q();
  CHECK((sample_mean(back) - want_mean).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((sample_cov(back) - want_cov).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("compressing an all-identical set returns copies of that point") {
  SigmaSet s;
  s.points = Eigen::Vector2d(1.5, 2.5).replicate(1, 7);
  s.weights = Eigen::VectorXd::Constant(7, 1.0 / 7.0);
  s.weights[0] += 1.0 - s.weights.sum();
  const SigmaSet c = compress_sigma_points(s);
  for (int i = 0; i < c.size(); ++i) {
    CHECK((c.points.col(i) - Eigen::Vector2d(1.5, 2.5)).norm() == 0.0);
  }
}

TEST_CASE("compression preserves the first two moments on random inputs") {
  RngStream rng(61);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 4);
    const SigmaSet s = random_set(n, 2 + static_cast<int>(rng.next_u64() % 30), rng);
    const SigmaSet c = compress_sigma_points(s);
    REQUIRE((sample_mean(c) - sample_mean(s)).cwiseAbs().maxCoeff() < 1e-9);
    REQUIRE((sample_cov(c) - sample_cov(s)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("frozen dynamics keep every step identical") {
  const LinearGaussianModel identity(Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Zero());
  const GaussianMoments x0{Eigen::Vector2d(0.7, -0.3), 0.2 * Eigen::Matrix2d::Identity()};
  const HorizonPrediction pred = predict_horizon(x0, identity, 4);
  REQUIRE(pred.per_step.size() == 5);
  for (int tau = 1; tau <= 4; ++tau) {
    CHECK((pred.step_moments[tau].mean - x0.mean).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pred.step_moments[tau].cov - x0.cov).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("linear-Gaussian horizon matches the closed-form recursion") {
  const LinearGaussianModel model = seeded_linear_model(3, 71);
  const GaussianMoments x0{Eigen::Vector3d(1.0, 0.0, -1.0),
                           0.3 * Eigen::Matrix3d::Identity()};
  const HorizonPrediction pred = predict_horizon(x0, model, 3);
  Eigen::VectorXd mu = x0.mean;
  Eigen::MatrixXd sigma = x0.cov;
  for (int tau = 1; tau <= 3; ++tau) {
    mu = model.a() * mu;
    sigma = model.a() * sigma * model.a().transpose() + model.q();
    REQUIRE((pred.step_moments[tau].mean - mu).cwiseAbs().maxCoeff() < 1e-7);
    REQUIRE((pred.step_moments[tau].cov - sigma).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("horizon prediction keeps 2n+1 points while expansion-only grows geometrically") {
  CosSinBenchmark model(20.0);
  const GaussianMoments x0{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero()};
  const HorizonPrediction ec = predict_horizon(x0, model, 4);
  for (const SigmaSet& s : ec.per_step) CHECK(s.size() == 5);
  const HorizonPrediction eonly = predict_horizon_expansion_only(x0, model, 4);
  int want = 5;
  for (const SigmaSet& s : eonly.per_step) {
    CHECK(s.size() == want);
    want *= 5;
  }
  CHECK_THROWS_AS(predict_horizon_expansion_only(x0, model, 7), std::invalid_argument);
}

TEST_CASE("step moments agree with the per-step sets") {
  CosSinBenchmark model(20.0);
  const GaussianMoments x0{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()};
  const HorizonPrediction pred = predict_horizon(x0, model, 3);
  for (std::size_t tau = 0; tau < pred.per_step.size(); ++tau) {
    CHECK((sample_mean(pred.per_step[tau]) - pred.step_moments[tau].mean).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK((sample_cov(pred.per_step[tau]) - pred.step_moments[tau].cov).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("monte carlo follows a deterministic orbit exactly") {
  DeterministicMap model;
  const Eigen::Vector2d x0(0.4, 0.1);
  const auto steps = monte_carlo_propagate(x0, model, 3, 50, 9);
  Eigen::Vector2d x = x0;
  for (int tau = 1; tau <= 3; ++tau) {
    x = DeterministicMap::f(x);
    for (int p = 0; p < 50; ++p) REQUIRE((steps[tau].col(p) - x).norm() == 0.0);
  }
}

TEST_CASE("monte carlo one-step mean is within the standard-error bound") {
  const LinearGaussianModel model = seeded_linear_model(2, 81);
  const Eigen::Vector2d x0(0.5, -0.5);
  const int particles = 50000;
  const auto steps = monte_carlo_propagate(x0, model, 1, particles, 123);
  const Eigen::VectorXd mean = steps[1].rowwise().mean();
  const Eigen::VectorXd want = model.a() * x0;
  const double bound = 3.0 * std::sqrt(model.q().trace() / particles);
  CHECK((mean - want).norm() < bound);
}

TEST_CASE("monte carlo gamma step reproduces the analytic skewness") {
  GammaBenchmark model([](double) { return 4.0; }, [](double) { return 1.0; });
  const auto steps = monte_carlo_propagate(Eigen::VectorXd::Ones(1), model, 1, 200000, 7);
  const Eigen::VectorXd xs = steps[1].row(0).transpose();
  const double mean = xs.mean();
  double m2 = 0.0, m3 = 0.0;
  for (int i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= xs.size();
  m3 /= xs.size();
  CHECK(m3 / std::pow(m2, 1.5) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("monte carlo is bitwise reproducible and worker-count independent") {
  CosSinBenchmark model(20.0);
  const Eigen::Vector2d x0(0.0, 0.0);

  setenv("FORESEE_THREADS", "1", 1);
  const auto serial = monte_carlo_propagate(x0, model, 3, 4096, 42);
  setenv("FORESEE_THREADS", "8", 1);
  const auto parallel = monte_carlo_propagate(x0, model, 3, 4096, 42);
  unsetenv("FORESEE_THREADS");
  const auto again = monte_carlo_propagate(x0, model, 3, 4096, 42);

  for (int tau = 0; tau <= 3; ++tau) {
    REQUIRE(serial[tau] == parallel[tau]);
    REQUIRE(serial[tau] == again[tau]);
  }
}

TEST_CASE("successive gaussian is exact on linear models") {
  const LinearGaussianModel model = seeded_linear_model(2, 91);
  const GaussianMoments x0{Eigen::Vector2d(0.2, 0.4), 0.5 * Eigen::Matrix2d::Identity()};
  const auto traj = successive_gaussian_propagate(x0, model, 3);
  Eigen::VectorXd mu = x0.mean;
  Eigen::MatrixXd sigma = x0.cov;
  for (int tau = 1; tau <= 3; ++tau) {
    mu = model.a() * mu;
    sigma = model.a() * sigma * model.a().transpose() + model.q();
    REQUIRE((traj[tau].mean - mu).cwiseAbs().maxCoeff() < 1e-6);
    REQUIRE((traj[tau].cov - sigma).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("successive gaussian keeps a deterministic start on the orbit with zero covariance") {
  DeterministicMap model;
  const GaussianMoments x0{Eigen::Vector2d(0.4, 0.1), Eigen::Matrix2d::Zero()};
  const auto traj = successive_gaussian_propagate(x0, model, 3);
  Eigen::Vector2d x(0.4, 0.1);
  for (int tau = 1; tau <= 3; ++tau) {
    x = DeterministicMap::f(x);
    REQUIRE((traj[tau].mean - x).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(traj[tau].cov.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  CosSinBenchmark model(1.0);
  SigmaSet s;
  s.points = Eigen::Vector3d(0.0, 0.0, 0.0);
  s.weights = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(expand_sigma_points(s, model), std::invalid_argument);
}
