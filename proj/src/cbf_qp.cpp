#include "foresee/cbf_qp.hpp"

#include <algorithm>
#include <cmath>

#include "foresee/errors.hpp"

namespace foresee {

namespace {

AffineRow linearize_scalar(const Eigen::VectorXd& x, const StepFn& step, const StateFn& fn,
                           int input_dim) {
  // h(x + f(x,u) dt) ~ h(x+|u=0) + sum_j u_j * (h(x+|u=e_j) - h(x+|u=0)),
  // exact in u for a control-affine step map composed with the first-order
  // expansion of h about x.
  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(input_dim);
  const Eigen::VectorXd x_drift = step(x, u0);
  const int n = static_cast<int>(x.size());

  // Central-difference gradient of fn at x.
  Eigen::VectorXd grad(n);
  for (int j = 0; j < n; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    Eigen::VectorXd lo = x, hi = x;
    lo[j] -= h;
    hi[j] += h;
    grad[j] = (fn(hi) - fn(lo)) / (2.0 * h);
  }

  AffineRow row;
  row.constant = fn(x) + grad.dot(x_drift - x);
  row.coeff_u.resize(input_dim);
  for (int j = 0; j < input_dim; ++j) {
    Eigen::VectorXd ej = Eigen::VectorXd::Zero(input_dim);
    ej[j] = 1.0;
    row.coeff_u[j] = grad.dot(step(x, ej) - x_drift);
  }
  if (!std::isfinite(row.constant) || !row.coeff_u.allFinite()) {
    throw NonFiniteRowError("linearize_constraints: non-finite row");
  }
  return row;
}

}  // namespace

LinearizedConstraints linearize_constraints(const Eigen::VectorXd& x, const StepFn& step,
                                            const std::vector<StateFn>& h_fns,
                                            const StateFn& v_fn, int input_dim) {
  LinearizedConstraints lin;
  lin.h_now.resize(static_cast<Eigen::Index>(h_fns.size()));
  for (std::size_t i = 0; i < h_fns.size(); ++i) {
    lin.cbf_next.push_back(linearize_scalar(x, step, h_fns[i], input_dim));
    lin.h_now[static_cast<Eigen::Index>(i)] = h_fns[i](x);
  }
  lin.clf_next = linearize_scalar(x, step, v_fn, input_dim);
  lin.v_now = v_fn(x);
  if (!lin.h_now.allFinite() || !std::isfinite(lin.v_now)) {
    throw NonFiniteRowError("linearize_constraints: non-finite constraint value");
  }
  return lin;
}

CbfQpSolution solve_cbf_qp(const CbfQpProblem& prob) {
  const int m = static_cast<int>(prob.u_d.size());
  const int n_cbf = static_cast<int>(prob.lin.cbf_next.size());
  const int n_in = static_cast<int>(prob.a_in.rows());
  const int nz = m + 1;  // (u, delta)

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nz, nz);
  h.topLeftCorner(m, m) = 2.0 * prob.p;
  h(m, m) = 2.0 * prob.q;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nz);
  g.head(m) = -2.0 * prob.p * prob.u_d;

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(1 + n_cbf + n_in, nz);
  Eigen::VectorXd d(1 + n_cbf + n_in);
  // CLF: V(x+) <= (1 - a0) V + delta
  c.row(0).head(m) = prob.lin.clf_next.coeff_u.transpose();
  c(0, m) = -1.0;
  d[0] = (1.0 - prob.alphas[0]) * prob.lin.v_now - prob.lin.clf_next.constant;
  // CBF i: h_i(x+) >= (1 - a_i) h_i
  for (int i = 0; i < n_cbf; ++i) {
    c.row(1 + i).head(m) = -prob.lin.cbf_next[i].coeff_u.transpose();
    d[1 + i] = prob.lin.cbf_next[i].constant - (1.0 - prob.alphas[1 + i]) * prob.lin.h_now[i];
  }
  if (n_in > 0) {
    c.block(1 + n_cbf, 0, n_in, m) = prob.a_in;
    d.tail(n_in) = prob.b_in;
  }

  const QpResult qp = qp_solve(h, g, c, d);
  CbfQpSolution sol;
  sol.status = qp.status;
  sol.kkt_residual = qp.kkt_residual;
  sol.active_set = qp.active_set;
  sol.infeasible_rows = qp.infeasible_rows;
  sol.u = qp.z.head(m);
  sol.delta = qp.z[m];
  return sol;
}

double squash_rate(double raw) {
  const double s = 1.0 / (1.0 + std::exp(-raw));
  return std::min(1.0 - 1e-6, std::max(1e-6, s));
}

double squash_rate_grad(double raw) {
  const double s = 1.0 / (1.0 + std::exp(-raw));
  if (s <= 1e-6 || s >= 1.0 - 1e-6) return 0.0;  // clamped region
  return s * (1.0 - s);
}

Eigen::MatrixXd policy_jacobian_fd(
    const std::function<CbfQpProblem(const Eigen::VectorXd&)>& assemble,
    const Eigen::VectorXd& raw_theta, double fd_step) {
  const CbfQpSolution base = solve_cbf_qp(assemble(raw_theta));
  if (base.status != QpStatus::Optimal) {
    throw PolicyDomainError("policy_jacobian_fd: QP infeasible at base point");
  }
  const int m = static_cast<int>(base.u.size());
  const int k = static_cast<int>(raw_theta.size());
  Eigen::MatrixXd jac(m, k);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd lo = raw_theta, hi = raw_theta;
    lo[j] -= fd_step;
    hi[j] += fd_step;
    const CbfQpSolution shi = solve_cbf_qp(assemble(hi));
    const CbfQpSolution slo = solve_cbf_qp(assemble(lo));
    if (shi.status != QpStatus::Optimal || slo.status != QpStatus::Optimal) {
      throw PolicyDomainError("policy_jacobian_fd: QP infeasible at perturbed point");
    }
    jac.col(j) = (shi.u - slo.u) / (2.0 * fd_step);
  }
  return jac;
}

Eigen::MatrixXd policy_jacobian_kkt(
    const std::function<CbfQpProblem(const Eigen::VectorXd&)>& assemble,
    const Eigen::VectorXd& raw_theta) {
  const CbfQpProblem prob = assemble(raw_theta);
  const int m = static_cast<int>(prob.u_d.size());
  const int n_cbf = static_cast<int>(prob.lin.cbf_next.size());
  const int nz = m + 1;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nz, nz);
  h.topLeftCorner(m, m) = 2.0 * prob.p;
  h(m, m) = 2.0 * prob.q;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nz);
  g.head(m) = -2.0 * prob.p * prob.u_d;

  // Rebuild rows exactly as solve_cbf_qp assembles them.
  const int n_in = static_cast<int>(prob.a_in.rows());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(1 + n_cbf + n_in, nz);
  Eigen::VectorXd d(1 + n_cbf + n_in);
  c.row(0).head(m) = prob.lin.clf_next.coeff_u.transpose();
  c(0, m) = -1.0;
  d[0] = (1.0 - prob.alphas[0]) * prob.lin.v_now - prob.lin.clf_next.constant;
  for (int i = 0; i < n_cbf; ++i) {
    c.row(1 + i).head(m) = -prob.lin.cbf_next[i].coeff_u.transpose();
    d[1 + i] = prob.lin.cbf_next[i].constant - (1.0 - prob.alphas[1 + i]) * prob.lin.h_now[i];
  }
  if (n_in > 0) {
    c.block(1 + n_cbf, 0, n_in, m) = prob.a_in;
    d.tail(n_in) = prob.b_in;
  }

  const QpResult qp = qp_solve(h, g, c, d);
  if (qp.status != QpStatus::Optimal) {
    throw PolicyDomainError("policy_jacobian_kkt: QP infeasible");
  }

  // Strict complementarity: active rows need clearly positive duals, inactive
  // rows clearly positive slack.
  const double act_tol = 1e-7;
  for (int i = 0; i < c.rows(); ++i) {
    const bool active =
        std::find(qp.active_set.begin(), qp.active_set.end(), i) != qp.active_set.end();
    const double slack = d[i] - c.row(i).dot(qp.z);
    if (active && qp.duals[i] < act_tol) {
      throw DegenerateActiveSetError("policy_jacobian_kkt: weakly active row");
    }
    if (!active && slack < act_tol) {
      throw DegenerateActiveSetError("policy_jacobian_kkt: near-active inactive row");
    }
  }

  const int na = static_cast<int>(qp.active_set.size());
  const int k = static_cast<int>(raw_theta.size());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, k);
  if (na == 0) return jac;  // u = u_d independent of the rates

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nz + na, nz + na);
  kkt.topLeftCorner(nz, nz) = h;
  for (int a = 0; a < na; ++a) {
    kkt.block(0, nz + a, nz, 1) = c.row(qp.active_set[a]).transpose();
    kkt.block(nz + a, 0, 1, nz) = c.row(qp.active_set[a]);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt);

  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nz + na);
    const double dalpha = squash_rate_grad(raw_theta[j]);
    for (int a = 0; a < na; ++a) {
      const int row = qp.active_set[a];
      double dd = 0.0;
      if (row == 0 && j == 0) dd = -prob.lin.v_now * dalpha;
      if (row >= 1 && row <= n_cbf && j == row) dd = prob.lin.h_now[row - 1] * dalpha;
      rhs[nz + a] = dd;
    }
    const Eigen::VectorXd dz = lu.solve(rhs);
    jac.col(j) = dz.head(m);
  }
  return jac;
}

}  // namespace foresee
