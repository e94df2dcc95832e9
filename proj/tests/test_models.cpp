#include <cmath>

#include "doctest.h"
#include "foresee/errors.hpp"
#include "foresee/models.hpp"
#include "foresee/unscented.hpp"

using namespace foresee;

namespace {

// Empirical check that a sampler agrees with its declared conditional
// moments: 1e5 seeded draws at a state, each statistic within 4 standard
// errors.
void check_sampler_matches_moments(const StochasticModel& model, const Eigen::VectorXd& x,
                                   std::uint64_t seed) {
  const int n = model.state_dim();
  const GaussianMoments want = model.conditional_moments(x, 0);
  const int draws = 100000;
  Eigen::MatrixXd samples(n, draws);
  for (int i = 0; i < draws; ++i) {
    RngStream rng(seed, i);
    samples.col(i) = model.sample(x, 0, rng);
  }
  const Eigen::VectorXd mean = samples.rowwise().mean();
  for (int j = 0; j < n; ++j) {
    const double se = std::sqrt(want.cov(j, j) / draws) + 1e-12;
    REQUIRE(std::abs(mean[j] - want.mean[j]) < 4.0 * se);
  }
  Eigen::MatrixXd centered = samples.colwise() - mean;
  const Eigen::MatrixXd cov = centered * centered.transpose() / draws;
  for (int j = 0; j < n; ++j) {
    // Var of a sample variance of a Gaussian is about 2 sigma^4 / N.
    const double se = std::sqrt(2.0 / draws) * want.cov(j, j) + 1e-12;
    REQUIRE(std::abs(cov(j, j) - want.cov(j, j)) < 6.0 * se);
  }
}

}  // namespace

TEST_CASE("cos/sin moments at the origin") {
  CosSinBenchmark model(20.0);
  const GaussianMoments m = model.conditional_moments(Eigen::Vector2d(0.0, 0.0), 0);
  CHECK(m.mean[0] == doctest::Approx(20.2).epsilon(1e-15));
  CHECK(m.mean[1] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(m.cov(0, 0) == doctest::Approx(408.05).epsilon(1e-15));
  CHECK(m.cov(1, 1) == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("cos/sin moments at [pi/2, 0]") {
  CosSinBenchmark model(20.0);
  const GaussianMoments m = model.conditional_moments(Eigen::Vector2d(M_PI / 2.0, 0.0), 0);
  CHECK(m.mean[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(m.mean[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(m.cov(0, 0) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(m.cov(1, 1) == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("cos/sin with a=0 degenerates to the noise floor") {
  CosSinBenchmark model(0.0);
  const GaussianMoments m = model.conditional_moments(Eigen::Vector2d(1.0, -2.0), 0);
  CHECK(m.mean.cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.cov(0, 0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(m.cov(1, 1) == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("cos/sin covariance never drops below the floor") {
  CosSinBenchmark model(20.0);
  RngStream rng(3);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d x(10.0 * rng.next_gaussian(), 10.0 * rng.next_gaussian());
    const GaussianMoments m = model.conditional_moments(x, 0);
    CHECK(m.cov(0, 0) >= 0.01);
    CHECK(m.cov(1, 1) >= 0.01);
  }
}

TEST_CASE("gamma moments for k=1, b=1") {
  const GaussianMoments m = gamma_moments(1.0, 1.0);
  const HigherMoments hm = gamma_higher_moments(1.0, 1.0);
  CHECK(m.mean[0] == 1.0);
  CHECK(m.cov(0, 0) == 1.0);
  CHECK(hm.skewness[0] == 2.0);
  CHECK(hm.kurtosis[0] == 9.0);
}

TEST_CASE("gamma moments for k=4, b=0.5") {
  const GaussianMoments m = gamma_moments(4.0, 0.5);
  const HigherMoments hm = gamma_higher_moments(4.0, 0.5);
  CHECK(m.mean[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m.cov(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hm.skewness[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hm.kurtosis[0] == doctest::Approx(4.5).epsilon(1e-15));
}

TEST_CASE("gamma approaches the Gaussian limit for large shape") {
  const HigherMoments hm = gamma_higher_moments(1e6, 1.0);
  CHECK(hm.skewness[0] == doctest::Approx(0.0).epsilon(1e-2));
  CHECK(hm.kurtosis[0] == doctest::Approx(3.0).epsilon(1e-2));
}

TEST_CASE("gamma rejects non-positive parameters") {
  CHECK_THROWS_AS(gamma_moments(0.0, 1.0), NonPositiveShapeError);
  CHECK_THROWS_AS(gamma_moments(1.0, -1.0), NonPositiveShapeError);
  GammaBenchmark bad([](double) { return -2.0; }, [](double) { return 1.0; });
  CHECK_THROWS_AS(bad.conditional_moments(Eigen::VectorXd::Ones(1), 0), NonPositiveShapeError);
}

TEST_CASE("unicycle step map examples") {
  const Eigen::Vector4d f1 =
      unicycle_step_mean(Eigen::Vector4d(0.0, 0.0, 0.0, 1.0), Eigen::Vector2d(0.0, 0.0), 0.05);
  CHECK((f1 - Eigen::Vector4d(0.05, 0.0, 0.0, 1.0)).cwiseAbs().maxCoeff() < 1e-15);

  const Eigen::Vector4d x2(1.0, 2.0, 0.3, 0.0);
  CHECK((unicycle_step_mean(x2, Eigen::Vector2d(0.0, 0.0), 0.05) - x2).cwiseAbs().maxCoeff() ==
        0.0);

  const Eigen::Vector4d f3 =
      unicycle_step_mean(Eigen::Vector4d(0.0, 0.0, M_PI / 2.0, 2.0), Eigen::Vector2d(1.0, 1.0),
                         0.05);
  CHECK(f3[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f3[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(f3[2] == doctest::Approx(M_PI / 2.0 + 0.05).epsilon(1e-12));
  CHECK(f3[3] == doctest::Approx(2.05).epsilon(1e-12));
}

TEST_CASE("unicycle stochastic covariance is diagonal and nonnegative") {
  DynamicUnicycle model(0.05);
  RngStream rng(5);
  for (int i = 0; i < 100; ++i) {
    Eigen::Vector4d x;
    for (int j = 0; j < 4; ++j) x[j] = 3.0 * rng.next_gaussian();
    const Eigen::Vector2d u(rng.next_gaussian(), rng.next_gaussian());
    const GaussianMoments m = model.conditional_moments(x, u, 0);
    const Eigen::Vector4d f = unicycle_step_mean(x, u, 0.05);
    CHECK((m.mean - 1.5 * f).cwiseAbs().maxCoeff() < 1e-14);
    for (int r = 0; r < 4; ++r) {
      CHECK(m.cov(r, r) >= 0.0);
      for (int c = 0; c < 4; ++c) {
        if (r != c) CHECK(m.cov(r, c) == 0.0);
      }
    }
  }
}

TEST_CASE("leader conditional moments follow the commanded profile") {
  const Eigen::Vector2d p(1.0, 2.0);
  const double t = 0.35, dt = 0.05;
  const GaussianMoments m = leader_step_moments(p, t, dt);
  const Eigen::Vector2d u(2.0, 3.0 * std::cos(4.0 * M_PI * t));
  CHECK((m.mean - (p + 1.25 * dt * u)).cwiseAbs().maxCoeff() < 1e-15);
  const double var = 0.25 * (u[0] * u[0] + u[1] * u[1]) * dt * dt;
  CHECK(m.cov(0, 0) == doctest::Approx(var).epsilon(1e-14));
  CHECK(m.cov(1, 1) == doctest::Approx(var).epsilon(1e-14));
  CHECK(m.cov(0, 1) == 0.0);
}

TEST_CASE("leader-follower constraint boundary cases") {
  LeaderFollowerParams params;
  // On the inner boundary: h1 = 0.
  const Eigen::Vector2d leader(params.s_min, 0.0);
  const Eigen::Vector3d follower(0.0, 0.0, 0.0);
  const LfConstraintValues v = lf_constraints(leader, follower, params);
  CHECK(v.h1 == doctest::Approx(0.0).epsilon(1e-15));

  // At the reference distance: V = 0.
  const double s_ref = 0.5 * (params.s_min + params.s_max);
  const LfConstraintValues v2 =
      lf_constraints(Eigen::Vector2d(s_ref, 0.0), follower, params);
  CHECK(v2.v == doctest::Approx(0.0).epsilon(1e-15));

  // Leader dead ahead: h3 = 1 - cos(gamma) > 0.
  const LfConstraintValues v3 = lf_constraints(Eigen::Vector2d(1.0, 0.0), follower, params);
  CHECK(v3.h3 == doctest::Approx(1.0 - std::cos(params.fov_half_angle)).epsilon(1e-12));
  CHECK(v3.h3 > 0.0);

  CHECK_THROWS_AS(lf_constraints(Eigen::Vector2d(0.0, 0.0), follower, params),
                  CoincidentAgentsError);
}

TEST_CASE("samplers agree with their conditional moments") {
  CosSinBenchmark cossin(20.0);
  check_sampler_matches_moments(cossin, Eigen::Vector2d(0.3, -0.7), 1001);

  GammaBenchmark gamma;
  check_sampler_matches_moments(gamma, Eigen::VectorXd::Constant(1, 2.0), 1002);

  RngStream rng(1003);
  Eigen::MatrixXd a(2, 2), b(2, 2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      a(i, j) = rng.next_gaussian();
      b(i, j) = 0.5 * rng.next_gaussian();
    }
  const LinearGaussianModel lin(a, b * b.transpose());
  check_sampler_matches_moments(lin, Eigen::Vector2d(1.0, -1.0), 1004);
}

TEST_CASE("unicycle sampler agrees with its conditional moments") {
  DynamicUnicycle plant(0.05);
  const Eigen::Vector4d x(0.5, -0.2, 0.4, 1.2);
  const Eigen::Vector2d u(0.3, 0.8);
  const GaussianMoments want = plant.conditional_moments(x, u, 0);
  const int draws = 100000;
  Eigen::MatrixXd samples(4, draws);
  for (int i = 0; i < draws; ++i) {
    RngStream rng(1005, i);
    samples.col(i) = plant.sample(x, u, 0, rng);
  }
  const Eigen::VectorXd mean = samples.rowwise().mean();
  for (int j = 0; j < 4; ++j) {
    const double se = std::sqrt(want.cov(j, j) / draws) + 1e-12;
    CHECK(std::abs(mean[j] - want.mean[j]) < 4.0 * se);
  }
}
