#include <cmath>

#include "doctest.h"
#include "foresee/rng.hpp"

using namespace foresee;

TEST_CASE("streams with the same key reproduce the same draws") {
  RngStream a(42, 7, 3);
  RngStream b(42, 7, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("streams with different keys differ") {
  RngStream a(42, 7, 3);
  RngStream b(42, 7, 4);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
  CHECK(same == 0);
}

TEST_CASE("gaussian draws have unit moments") {
  RngStream rng(2024);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_gaussian();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("gamma draws match the analytic mean and variance") {
  RngStream rng(7);
  const double shape = 4.0, scale = 0.5;
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gamma(shape, scale);
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(shape * scale).epsilon(0.01));
  CHECK(var == doctest::Approx(shape * scale * scale).epsilon(0.05));
}

TEST_CASE("gamma sampler covers shapes below one") {
  RngStream rng(9);
  const double shape = 0.5, scale = 2.0;
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.next_gamma(shape, scale);
  CHECK(sum / n == doctest::Approx(shape * scale).epsilon(0.02));
}

TEST_CASE("uniform draws stay in the unit interval") {
  RngStream rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
