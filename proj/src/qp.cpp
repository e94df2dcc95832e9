#include "foresee/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "foresee/errors.hpp"

namespace foresee {

namespace {

double violation_scale(const Eigen::MatrixXd& c, const Eigen::VectorXd& d) {
  double s = 1.0;
  if (c.size() > 0) s += c.cwiseAbs().maxCoeff();
  if (d.size() > 0) s += d.cwiseAbs().maxCoeff();
  return s;
}

}  // namespace

QpResult qp_solve(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, const Eigen::MatrixXd& c,
                  const Eigen::VectorXd& d) {
  const int n = static_cast<int>(h.rows());
  const int m = static_cast<int>(c.rows());
  const Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (h + h.transpose()));
  if (llt.info() != Eigen::Success) {
    throw SolverFailure("qp_solve: objective Hessian is not positive definite");
  }

  QpResult res;
  res.z = llt.solve(-g);
  res.duals.setZero(m);
  std::vector<int>& active = res.active_set;
  Eigen::VectorXd lambda;  // duals of the active rows, in `active` order

  const double tol = 1e-10 * violation_scale(c, d) * (1.0 + res.z.cwiseAbs().maxCoeff());
  const int max_iter = 100 * (m + 1);

  for (int iter = 0; iter < max_iter; ++iter) {
    // Most violated row.
    int p = -1;
    double worst = tol;
    for (int i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double v = c.row(i).dot(res.z) - d[i];
      if (v > worst) {
        worst = v;
        p = i;
      }
    }
    if (p < 0) break;  // primal feasible: done

    const Eigen::VectorXd np = c.row(p).transpose();
    double lambda_p = 0.0;
    bool added = false;
    for (int inner = 0; inner < max_iter && !added; ++inner) {
      const int na = static_cast<int>(active.size());
      Eigen::VectorXd rho(na);
      Eigen::VectorXd xi;
      if (na == 0) {
        xi = llt.solve(np);
      } else {
        Eigen::MatrixXd nmat(n, na);
        for (int k = 0; k < na; ++k) nmat.col(k) = c.row(active[k]).transpose();
        const Eigen::MatrixXd hinv_n = llt.solve(nmat);
        const Eigen::MatrixXd gram = nmat.transpose() * hinv_n;
        rho = gram.ldlt().solve(nmat.transpose() * llt.solve(np));
        xi = llt.solve(np - nmat * rho);
      }
      const double denom = np.dot(xi);
      const double xi_scale = 1.0 + np.squaredNorm();

      // Dual step bound: active duals must stay nonnegative.
      double t2 = std::numeric_limits<double>::infinity();
      int drop = -1;
      for (int k = 0; k < na; ++k) {
        if (rho[k] > 1e-12) {
          const double step = lambda[k] / rho[k];
          if (step < t2) {
            t2 = step;
            drop = k;
          }
        }
      }

      if (denom <= 1e-14 * xi_scale) {
        // The new normal lies in the span of the active ones.
        if (drop < 0) {
          res.status = QpStatus::Infeasible;
          res.infeasible_rows = active;
          res.infeasible_rows.push_back(p);
          res.objective = 0.5 * res.z.dot(h * res.z) + g.dot(res.z);
          return res;
        }
        lambda -= t2 * rho;
        lambda_p += t2;
        active.erase(active.begin() + drop);
        Eigen::VectorXd nl(lambda.size() - 1);
        nl << lambda.head(drop), lambda.tail(lambda.size() - drop - 1);
        lambda = nl;
        continue;
      }

      const double t1 = (c.row(p).dot(res.z) - d[p]) / denom;
      const double t = std::min(t1, t2);
      res.z -= t * xi;
      if (lambda.size() > 0) lambda -= t * rho;
      lambda_p += t;
      if (t == t1) {
        active.push_back(p);
        Eigen::VectorXd nl(lambda.size() + 1);
        nl << lambda, lambda_p;
        lambda = nl;
        added = true;
      } else {
        active.erase(active.begin() + drop);
        Eigen::VectorXd nl(lambda.size() - 1);
        nl << lambda.head(drop), lambda.tail(lambda.size() - drop - 1);
        lambda = nl;
      }
    }
    if (!added && res.status == QpStatus::Optimal) {
      // Loop ended without adding p; only possible via the iteration cap.
      throw SolverFailure("qp_solve: active-set inner iteration cap reached");
    }
  }

  for (int k = 0; k < static_cast<int>(active.size()); ++k) {
    res.duals[active[k]] = std::max(0.0, lambda[k]);
  }
  res.objective = 0.5 * res.z.dot(h * res.z) + g.dot(res.z);

  // Scaled KKT residuals.
  double resid = 0.0;
  const Eigen::VectorXd stat = h * res.z + g + c.transpose() * res.duals;
  resid = stat.cwiseAbs().maxCoeff() /
          (1.0 + g.cwiseAbs().maxCoeff() + h.cwiseAbs().maxCoeff() * res.z.cwiseAbs().maxCoeff());
  for (int i = 0; i < m; ++i) {
    const double scale = 1.0 + std::abs(d[i]) + c.row(i).cwiseAbs().maxCoeff() *
                                                    (1.0 + res.z.cwiseAbs().maxCoeff());
    const double slack = c.row(i).dot(res.z) - d[i];
    resid = std::max(resid, slack / scale);
    resid = std::max(resid, std::abs(res.duals[i] * slack) / scale);
  }
  res.kkt_residual = resid;
  if (!(resid <= 1e-8)) throw SolverFailure("qp_solve: KKT residual check failed");
  return res;
}

}  // namespace foresee
