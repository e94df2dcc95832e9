#pragma once

#include <Eigen/Dense>

namespace foresee {

struct LpResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd row_duals;    // for A x <= b
  Eigen::VectorXd upper_duals;  // for  x <= box
  Eigen::VectorXd lower_duals;  // for -x <= box
  double kkt_residual = 0.0;
};

// Solves min c'x subject to A x <= b and |x_i| <= box, by a two-phase dense
// simplex with Bland's rule. The box keeps the problem bounded; the returned
// point is a vertex of the feasible polytope (up to cost-free components of
// an optimal face). Scaled KKT residuals are verified to 1e-8.
// Throws LpInfeasibleError / SolverFailure.
LpResult lp_solve(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                  double box);

}  // namespace foresee
