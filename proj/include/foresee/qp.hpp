#pragma once

#include <vector>

#include <Eigen/Dense>

namespace foresee {

enum class QpStatus { Optimal, Infeasible };

struct QpResult {
  Eigen::VectorXd z;
  Eigen::VectorXd duals;          // one per row, >= 0
  std::vector<int> active_set;    // rows tight at the solution
  QpStatus status = QpStatus::Optimal;
  double objective = 0.0;
  double kkt_residual = 0.0;
  std::vector<int> infeasible_rows;  // certificate when Infeasible
};

// Solves min 1/2 z'H z + g'z subject to C z <= d for symmetric positive
// definite H, by a dual active-set method (start at the unconstrained
// minimizer, add violated rows one at a time). Small dense problems only.
// Throws SolverFailure on an iteration cap; infeasibility is a status, not an
// exception, since it is a signal several callers act on.
QpResult qp_solve(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, const Eigen::MatrixXd& c,
                  const Eigen::VectorXd& d);

}  // namespace foresee
