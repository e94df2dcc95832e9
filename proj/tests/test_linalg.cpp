#include "doctest.h"
#include "foresee/errors.hpp"
#include "foresee/linalg.hpp"
#include "foresee/rng.hpp"

using namespace foresee;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, RngStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.next_gaussian();
  return m;
}

}  // namespace

TEST_CASE("zero covariance factors to zero") {
  const Eigen::MatrixXd l = matrix_sqrt(Eigen::MatrixXd::Zero(2, 2));
  CHECK(l.isZero(0.0));
}

TEST_CASE("diagonal covariance factors to elementwise square roots") {
  Eigen::MatrixXd cov = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  const Eigen::MatrixXd l = matrix_sqrt(cov);
  CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l(1, 1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == 0.0);
}

TEST_CASE("random full-rank product reconstructs") {
  RngStream rng(11);
  const Eigen::MatrixXd a = random_matrix(3, 3, rng);
  const Eigen::MatrixXd cov = a * a.transpose();
  const Eigen::MatrixXd l = matrix_sqrt(cov);
  CHECK((l * l.transpose() - cov).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + cov.cwiseAbs().maxCoeff()));
}

TEST_CASE("reconstruction holds over 1000 random PSD matrices up to dim 8") {
  RngStream rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 8);
    const int rank = 1 + static_cast<int>(rng.next_u64() % n);  // rank-deficient cases included
    const Eigen::MatrixXd a = random_matrix(n, rank, rng);
    const Eigen::MatrixXd cov = a * a.transpose();
    const Eigen::MatrixXd l = matrix_sqrt(cov);
    const double err = (l * l.transpose() - cov).cwiseAbs().maxCoeff();
    REQUIRE(err <= 1e-8 * (1.0 + cov.cwiseAbs().maxCoeff()));
    // Lower triangular.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) REQUIRE(l(i, j) == 0.0);
  }
}

TEST_CASE("indefinite input raises NotPsdError") {
  Eigen::Matrix2d cov;
  cov << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(matrix_sqrt(cov), NotPsdError);
}

TEST_CASE("slightly indefinite input is rescued by jitter") {
  Eigen::Matrix2d cov;
  cov << 1.0, 0.0, 0.0, -1e-10;
  const Eigen::MatrixXd l = matrix_sqrt(cov);
  CHECK((l * l.transpose() - cov).cwiseAbs().maxCoeff() < 1e-8 * 2.0);
}

TEST_CASE("matrix_sqrt is deterministic") {
  RngStream rng(5);
  const Eigen::MatrixXd a = random_matrix(4, 4, rng);
  const Eigen::MatrixXd cov = a * a.transpose();
  CHECK(matrix_sqrt(cov) == matrix_sqrt(cov));
}
