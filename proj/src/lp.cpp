#include "foresee/lp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "foresee/errors.hpp"

namespace foresee {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;

// Dense tableau over the standard form min c'v, M v = q, v >= 0. The cost
// row carries reduced costs; basic columns are kept at identity.
struct Tableau {
  Eigen::MatrixXd t;        // rows x (vars + 1), last column is the RHS
  Eigen::RowVectorXd cost;  // vars + 1, last entry is -objective
  std::vector<int> basis;   // basic variable per row
  int vars = 0;

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    const double fc = cost(col);
    if (fc != 0.0) cost -= fc * t.row(row);
    basis[row] = col;
  }

  // Bland's rule; `allowed` masks columns that may enter. Returns false at
  // optimality. Throws SolverFailure on an unbounded ray or iteration cap.
  bool step(const std::vector<bool>& allowed) {
    int enter = -1;
    for (int j = 0; j < vars; ++j) {
      if (allowed[j] && cost(j) < -kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return false;
    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < t.rows(); ++r) {
      if (t(r, enter) > kPivotTol) {
        const double ratio = t(r, vars) / t(r, enter);
        if (leave < 0 || ratio < best - 1e-14 ||
            (ratio < best + 1e-14 && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
    }
    if (leave < 0) throw SolverFailure("lp_solve: unbounded direction in bounded problem");
    pivot(leave, enter);
    return true;
  }

  void run(const std::vector<bool>& allowed, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
      if (!step(allowed)) return;
    }
    throw SolverFailure("lp_solve: simplex iteration cap reached");
  }
};

LpResult box_only_solution(const Eigen::VectorXd& c, double box) {
  const int n = static_cast<int>(c.size());
  LpResult res;
  res.x.setZero(n);
  res.row_duals.resize(0);
  res.upper_duals.setZero(n);
  res.lower_duals.setZero(n);
  for (int j = 0; j < n; ++j) {
    if (c[j] > 0.0) {
      res.x[j] = -box;
      res.lower_duals[j] = c[j];
    } else if (c[j] < 0.0) {
      res.x[j] = box;
      res.upper_duals[j] = -c[j];
    }
  }
  res.objective = c.dot(res.x);
  res.kkt_residual = 0.0;
  return res;
}

}  // namespace

LpResult lp_solve(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                  double box) {
  if (!(box > 0.0)) throw std::invalid_argument("lp_solve: box radius must be positive");
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  if (m > 0 && a.cols() != n) throw std::invalid_argument("lp_solve: A shape mismatch");
  if (m == 0) return box_only_solution(c, box);

  // Shift to y = x + box >= 0; fold the upper bounds y <= 2*box in as rows.
  const int rows = m + n;
  Eigen::MatrixXd g(rows, n);
  Eigen::VectorXd h(rows);
  Eigen::VectorXd row_scale(rows);
  g.topRows(m) = a;
  h.head(m) = b + box * a.rowwise().sum();
  g.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
  h.tail(n).setConstant(2.0 * box);
  for (int i = 0; i < rows; ++i) {
    row_scale[i] = std::max(g.row(i).cwiseAbs().maxCoeff(), 1e-30);
    g.row(i) /= row_scale[i];
    h[i] /= row_scale[i];
  }

  // Variables: y (n), slacks (rows), then one artificial per negative-RHS row.
  std::vector<int> art_rows;
  for (int i = 0; i < rows; ++i) {
    if (h[i] < 0.0) art_rows.push_back(i);
  }
  const int n_art = static_cast<int>(art_rows.size());
  Tableau tab;
  tab.vars = n + rows + n_art;
  tab.t.setZero(rows, tab.vars + 1);
  tab.basis.assign(rows, -1);
  tab.t.block(0, 0, rows, n) = g;
  for (int i = 0; i < rows; ++i) {
    tab.t(i, n + i) = 1.0;
    tab.t(i, tab.vars) = h[i];
    tab.basis[i] = n + i;
  }
  for (int k = 0; k < n_art; ++k) {
    const int i = art_rows[k];
    tab.t.row(i) *= -1.0;
    tab.t(i, n + rows + k) = 1.0;
    tab.basis[i] = n + rows + k;
  }

  std::vector<bool> allowed(tab.vars, true);
  const int max_iter = 200 * (rows + tab.vars);

  if (n_art > 0) {
    tab.cost.setZero(tab.vars + 1);
    for (int k = 0; k < n_art; ++k) tab.cost(n + rows + k) = 1.0;
    for (int k = 0; k < n_art; ++k) tab.cost -= tab.t.row(art_rows[k]);
    tab.run(allowed, max_iter);
    const double phase1 = -tab.cost(tab.vars);
    if (phase1 > 1e-9 * (1.0 + h.cwiseAbs().maxCoeff())) {
      throw LpInfeasibleError("lp_solve: constraints are infeasible");
    }
    // Drive out or retire any artificial still basic at level zero.
    for (int r = 0; r < rows; ++r) {
      if (tab.basis[r] < n + rows) continue;
      int col = -1;
      double best_entry = 1e-7;
      for (int j = 0; j < n + rows; ++j) {
        if (std::abs(tab.t(r, j)) > best_entry) {
          col = j;
          best_entry = std::abs(tab.t(r, j));
        }
      }
      if (col >= 0) {
        tab.pivot(r, col);
      } else {
        tab.t.row(r).setZero();  // redundant row; inert from here on
      }
    }
    for (int j = n + rows; j < tab.vars; ++j) allowed[j] = false;
  }

  // Phase 2 with the real objective, scaled to unit magnitude.
  const double cost_scale = std::max(c.cwiseAbs().maxCoeff(), 1e-30);
  tab.cost.setZero(tab.vars + 1);
  tab.cost.head(n) = c.transpose() / cost_scale;
  for (int r = 0; r < rows; ++r) {
    const int j = tab.basis[r];
    if (j < tab.vars && tab.cost(j) != 0.0) tab.cost -= tab.cost(j) * tab.t.row(r);
  }
  tab.run(allowed, max_iter);

  LpResult res;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < rows; ++r) {
    if (tab.basis[r] < n) y[tab.basis[r]] = tab.t(r, tab.vars);
  }
  res.x = y.array() - box;
  res.objective = c.dot(res.x);

  // Reduced costs of slacks are the (scaled) duals of their rows; reduced
  // costs of y columns are the duals of the lower box bounds.
  res.row_duals.setZero(m);
  res.upper_duals.setZero(n);
  res.lower_duals.setZero(n);
  for (int i = 0; i < m; ++i) {
    res.row_duals[i] = std::max(0.0, tab.cost(n + i) * cost_scale / row_scale[i]);
  }
  for (int j = 0; j < n; ++j) {
    res.upper_duals[j] = std::max(0.0, tab.cost(n + m + j) * cost_scale / row_scale[m + j]);
    res.lower_duals[j] = std::max(0.0, tab.cost(j) * cost_scale);
  }

  // Scaled KKT residuals against the original data.
  double resid = 0.0;
  const Eigen::VectorXd stat =
      c + a.transpose() * res.row_duals + res.upper_duals - res.lower_duals;
  resid = stat.cwiseAbs().maxCoeff() / (1.0 + c.cwiseAbs().maxCoeff());
  const Eigen::VectorXd slack = a * res.x - b;
  for (int i = 0; i < m; ++i) {
    const double scale = 1.0 + std::abs(b[i]) + a.row(i).cwiseAbs().maxCoeff() * box;
    resid = std::max(resid, slack[i] / scale);
    resid = std::max(resid, std::abs(res.row_duals[i] * slack[i]) / scale);
  }
  for (int j = 0; j < n; ++j) {
    const double scale = 1.0 + box;
    resid = std::max(resid, (std::abs(res.x[j]) - box) / scale);
    resid = std::max(resid, std::abs(res.upper_duals[j] * (res.x[j] - box)) / scale);
    resid = std::max(resid, std::abs(res.lower_duals[j] * (-res.x[j] - box)) / scale);
  }
  res.kkt_residual = resid;
  if (!(resid <= 1e-8)) throw SolverFailure("lp_solve: KKT residual check failed");
  return res;
}

}  // namespace foresee
