#include <limits>
#include <optional>
#include <vector>

#include "doctest.h"
#include "foresee/errors.hpp"
#include "foresee/lp.hpp"
#include "foresee/rng.hpp"

using namespace foresee;

namespace {

// Independent oracle: enumerate every vertex candidate (each choice of n
// active rows out of the constraint rows plus box facets), keep the feasible
// ones, and take the best objective.
std::optional<double> enumerate_lp_optimum(const Eigen::VectorXd& c, const Eigen::MatrixXd& a,
                                           const Eigen::VectorXd& b, double box) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  Eigen::MatrixXd g(m + 2 * n, n);
  Eigen::VectorXd h(m + 2 * n);
  g.topRows(m) = a;
  h.head(m) = b;
  g.middleRows(m, n) = Eigen::MatrixXd::Identity(n, n);
  h.segment(m, n).setConstant(box);
  g.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
  h.tail(n).setConstant(box);

  const int rows = m + 2 * n;
  std::vector<int> pick(n);
  std::optional<double> best;
  const std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd gs(n, n);
      Eigen::VectorXd hs(n);
      for (int i = 0; i < n; ++i) {
        gs.row(i) = g.row(pick[i]);
        hs[i] = h[pick[i]];
      }
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(gs);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd x = lu.solve(hs);
      if (((g * x - h).array() > 1e-9).any()) return;
      const double obj = c.dot(x);
      if (!best || obj < *best) best = obj;
      return;
    }
    for (int i = start; i <= rows - (n - depth); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("single variable with a binding row") {
  Eigen::VectorXd c(1);
  c << -1.0;
  Eigen::MatrixXd a(1, 1);
  a << 1.0;
  Eigen::VectorXd b(1);
  b << 0.5;
  const LpResult res = lp_solve(c, a, b, 1.0);
  CHECK(res.x[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(res.kkt_residual <= 1e-8);
}

TEST_CASE("degenerate optimal face still reports the right objective") {
  Eigen::VectorXd c(2);
  c << -1.0, -1.0;
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 1.0;
  Eigen::VectorXd b(1);
  b << 1.0;
  const LpResult res = lp_solve(c, a, b, 1.0);
  CHECK(res.objective == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(res.kkt_residual <= 1e-8);
}

TEST_CASE("box-only problems take the sign solution") {
  Eigen::VectorXd c(3);
  c << -1.0, 2.0, 0.0;
  const LpResult res = lp_solve(c, Eigen::MatrixXd(0, 3), Eigen::VectorXd(0), 1.0);
  CHECK(res.x[0] == 1.0);
  CHECK(res.x[1] == -1.0);
  CHECK(res.x[2] == 0.0);
}

TEST_CASE("infeasible rows raise") {
  Eigen::VectorXd c(1);
  c << 1.0;
  Eigen::MatrixXd a(2, 1);
  a << 1.0, -1.0;
  Eigen::VectorXd b(2);
  b << -2.0, -2.0;  // x <= -2 and x >= 2
  CHECK_THROWS_AS(lp_solve(c, a, b, 1.0), LpInfeasibleError);
}

TEST_CASE("rows outside the box are infeasible") {
  Eigen::VectorXd c(1);
  c << 1.0;
  Eigen::MatrixXd a(1, 1);
  a << -1.0;
  Eigen::VectorXd b(1);
  b << -5.0;  // x >= 5 against |x| <= 1
  CHECK_THROWS_AS(lp_solve(c, a, b, 1.0), LpInfeasibleError);
}

TEST_CASE("random LPs match vertex enumeration") {
  RngStream rng(313);
  int solved = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);  // up to 4-D
    const int m = 1 + static_cast<int>(rng.next_u64() % 5);
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c[j] = rng.next_gaussian();
    Eigen::MatrixXd a(m, n);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = rng.next_gaussian();
      b[i] = rng.next_gaussian();
    }
    const auto want = enumerate_lp_optimum(c, a, b, 1.0);
    if (!want) {
      CHECK_THROWS_AS(lp_solve(c, a, b, 1.0), LpInfeasibleError);
      continue;
    }
    const LpResult res = lp_solve(c, a, b, 1.0);
    REQUIRE(res.objective == doctest::Approx(*want).epsilon(1e-8));
    REQUIRE(res.kkt_residual <= 1e-8);
    ++solved;
  }
  CHECK(solved >= 50);
}

TEST_CASE("binding row plus box vertex") {
  // min -x - 2y s.t. x + y <= 1, box 2: y rises to its bound 2, which forces
  // x = -1 on the row, so the optimum is 1 - 4 = -3 at the vertex (-1, 2).
  Eigen::VectorXd c(2);
  c << -1.0, -2.0;
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 1.0;
  Eigen::VectorXd b(1);
  b << 1.0;
  const LpResult res = lp_solve(c, a, b, 2.0);
  CHECK(res.objective == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(res.x[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(res.x[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(res.kkt_residual <= 1e-8);
}
