#pragma once

#include <functional>
#include <vector>

#include "foresee/qp.hpp"

namespace foresee {

using StateFn = std::function<double(const Eigen::VectorXd&)>;
// Full next state as a function of the current state and the control input.
using StepFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

// value(u) ~ constant + coeff_u . u
struct AffineRow {
  Eigen::VectorXd coeff_u;
  double constant = 0.0;
};

struct LinearizedConstraints {
  std::vector<AffineRow> cbf_next;  // linearized h_i(x+)
  Eigen::VectorXd h_now;            // h_i(x)
  AffineRow clf_next;               // linearized V(x+)
  double v_now = 0.0;
};

// First-order model of each barrier and Lyapunov value after one step. The
// step map must be control-affine; gradients are taken by central finite
// differences. Throws NonFiniteRowError when any value or slope is not finite.
LinearizedConstraints linearize_constraints(const Eigen::VectorXd& x, const StepFn& step,
                                            const std::vector<StateFn>& h_fns,
                                            const StateFn& v_fn, int input_dim);

// min (u - u_d)' P (u - u_d) + q delta^2
// s.t. V rows, barrier rows with decay rates alphas = [a0 (CLF), a1..aK], and
//      input bounds a_in u <= b_in.
struct CbfQpProblem {
  Eigen::MatrixXd p;
  double q = 1.0;
  Eigen::VectorXd u_d;
  Eigen::VectorXd alphas;
  Eigen::MatrixXd a_in;
  Eigen::VectorXd b_in;
  LinearizedConstraints lin;
};

struct CbfQpSolution {
  Eigen::VectorXd u;
  double delta = 0.0;
  QpStatus status = QpStatus::Optimal;
  double kkt_residual = 0.0;
  std::vector<int> active_set;       // row indices, in assembly order
  std::vector<int> infeasible_rows;  // certificate when Infeasible
};

// Row assembly order: CLF row, CBF rows, input-bound rows.
CbfQpSolution solve_cbf_qp(const CbfQpProblem& prob);

// Unconstrained rates are squashed into (0,1) with a 1e-6 margin so parameter
// updates cannot leave the valid interval.
double squash_rate(double raw);
double squash_rate_grad(double raw);

// Jacobian of the QP input with respect to the raw (pre-squash) rate vector.
// `assemble` must rebuild the QP for arbitrary raw rates at the same state.
// The finite-difference backend is the default; the implicit-KKT backend
// differentiates the active-set equations and requires strict complementarity
// (throws DegenerateActiveSetError otherwise).
Eigen::MatrixXd policy_jacobian_fd(const std::function<CbfQpProblem(const Eigen::VectorXd&)>& assemble,
                                   const Eigen::VectorXd& raw_theta, double fd_step = 1e-6);
Eigen::MatrixXd policy_jacobian_kkt(const std::function<CbfQpProblem(const Eigen::VectorXd&)>& assemble,
                                    const Eigen::VectorXd& raw_theta);

}  // namespace foresee
