#include "romshaper/control/dense_qp.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace romshaper {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rotation acting on entries (i, j): a' = c a + s b, b' = -s a + c b.
struct Givens {
  double c = 1.0, s = 0.0;
  static Givens Zeroing(double a, double b, double* norm) {
    const double h = std::hypot(a, b);
    *norm = h;
    if (h == 0.0) return {};
    return {a / h, b / h};
  }
};

void RotateColumns(Eigen::MatrixXd& m, int i, int j, const Givens& g) {
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const double a = m(k, i), b = m(k, j);
    m(k, i) = g.c * a + g.s * b;
    m(k, j) = -g.s * a + g.c * b;
  }
}

// Factorization state: J'HJ = I and R = J1' N for the active normals N.
class ActiveSetFactor {
 public:
  ActiveSetFactor(Eigen::MatrixXd j) : j_(std::move(j)) {
    const Eigen::Index n = j_.rows();
    r_ = Eigen::MatrixXd::Zero(n, n);
  }

  int size() const { return q_; }
  const Eigen::MatrixXd& j() const { return j_; }

  // Primal direction z = J2 d2 and dual direction r = R^-1 d1 for normal np.
  void Directions(const Eigen::VectorXd& np, Eigen::VectorXd* z,
                  Eigen::VectorXd* r) const {
    const Eigen::Index n = j_.rows();
    const Eigen::VectorXd d = j_.transpose() * np;
    *z = j_.rightCols(n - q_) * d.tail(n - q_);
    if (q_ > 0) {
      *r = r_.topLeftCorner(q_, q_)
               .triangularView<Eigen::Upper>()
               .solve(d.head(q_));
    } else {
      r->resize(0);
    }
  }

  bool Add(const Eigen::VectorXd& np) {
    const Eigen::Index n = j_.rows();
    Eigen::VectorXd d = j_.transpose() * np;
    for (Eigen::Index k = n - 1; k > q_; --k) {
      double h;
      const Givens g = Givens::Zeroing(d(k - 1), d(k), &h);
      if (h == 0.0) continue;
      d(k - 1) = h;
      d(k) = 0.0;
      RotateColumns(j_, static_cast<int>(k - 1), static_cast<int>(k), g);
    }
    if (std::abs(d(q_)) <= 1e-14 * std::max(1.0, d.head(q_ + 1).norm())) {
      return false;
    }
    r_.col(q_).head(q_ + 1) = d.head(q_ + 1);
    ++q_;
    return true;
  }

  void Drop(int l) {
    for (int c = l; c + 1 < q_; ++c) r_.col(c) = r_.col(c + 1);
    r_.col(q_ - 1).setZero();
    --q_;
    for (int c = l; c < q_; ++c) {
      double h;
      const Givens g = Givens::Zeroing(r_(c, c), r_(c + 1, c), &h);
      if (h == 0.0) continue;
      r_(c, c) = h;
      r_(c + 1, c) = 0.0;
      for (int k = c + 1; k < q_; ++k) {
        const double a = r_(c, k), b = r_(c + 1, k);
        r_(c, k) = g.c * a + g.s * b;
        r_(c + 1, k) = -g.s * a + g.c * b;
      }
      RotateColumns(j_, c, c + 1, g);
    }
  }

 private:
  Eigen::MatrixXd j_;
  Eigen::MatrixXd r_;
  int q_ = 0;
};

}  // namespace

const char* ToString(QpStatus status) {
  switch (status) {
    case QpStatus::kOptimal:
      return "optimal";
    case QpStatus::kInfeasible:
      return "infeasible";
    case QpStatus::kMaxIterations:
      return "max_iterations";
    case QpStatus::kNotConvex:
      return "not_convex";
  }
  return "?";
}

double QpKktResidual(const Eigen::MatrixXd& hessian,
                     const Eigen::VectorXd& gradient,
                     const Eigen::MatrixXd& a_ineq,
                     const Eigen::VectorXd& b_ineq, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& multipliers) {
  const Eigen::VectorXd stationarity =
      hessian * x + gradient - a_ineq.transpose() * multipliers;
  const Eigen::VectorXd slack = a_ineq * x - b_ineq;
  double res = stationarity.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    res = std::max(res, -slack(i));
    res = std::max(res, -multipliers(i));
    res = std::max(res, std::abs(multipliers(i) * slack(i)));
  }
  return res;
}

QpSolution SolveDenseQp(const Eigen::MatrixXd& hessian,
                        const Eigen::VectorXd& gradient,
                        const Eigen::MatrixXd& a_ineq,
                        const Eigen::VectorXd& b_ineq, int max_iterations) {
  const Eigen::Index n = hessian.rows();
  const Eigen::Index m = a_ineq.rows();
  if (max_iterations <= 0) max_iterations = static_cast<int>(50 + 10 * (n + m));

  QpSolution sol;
  sol.multipliers = Eigen::VectorXd::Zero(m);

  const Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success) {
    sol.status = QpStatus::kNotConvex;
    sol.x = Eigen::VectorXd::Zero(n);
    return sol;
  }
  // J = L^{-T}.
  const Eigen::MatrixXd l_inv =
      llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
  ActiveSetFactor factor(l_inv.transpose());

  Eigen::VectorXd x = -llt.solve(gradient);
  std::vector<int> active;
  std::vector<double> u;  // multipliers of the active constraints
  const double tol =
      1e-12 * std::max(1.0, b_ineq.size() > 0 ? b_ineq.cwiseAbs().maxCoeff()
                                              : 1.0);

  Eigen::VectorXd z, r;
  int iter = 0;
  while (true) {
    // Most violated inactive constraint.
    int p = -1;
    double worst = -tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double s = a_ineq.row(i).dot(x) - b_ineq(i);
      if (s < worst) {
        worst = s;
        p = static_cast<int>(i);
      }
    }
    if (p < 0) break;

    const Eigen::VectorXd np = a_ineq.row(p).transpose();
    double u_plus = 0.0;
    bool added = false;
    while (!added) {
      if (++iter > max_iterations) {
        sol.status = QpStatus::kMaxIterations;
        sol.x = x;
        sol.iterations = iter;
        return sol;
      }
      factor.Directions(np, &z, &r);
      const int q = factor.size();
      double t1 = kInf;
      int l = -1;
      for (int k = 0; k < q; ++k) {
        if (r(k) > 0.0) {
          const double ratio = u[k] / r(k);
          if (ratio < t1) {
            t1 = ratio;
            l = k;
          }
        }
      }
      const double s_p = a_ineq.row(p).dot(x) - b_ineq(p);
      const double zn = z.dot(np);
      const double t2 = (z.norm() > 1e-14 * std::max(1.0, np.norm()) &&
                         zn > 0.0)
                            ? -s_p / zn
                            : kInf;
      const double t = std::min(t1, t2);
      if (t == kInf) {
        sol.status = QpStatus::kInfeasible;
        sol.x = x;
        sol.iterations = iter;
        return sol;
      }
      if (t2 < kInf) x += t * z;
      for (int k = 0; k < q; ++k) u[k] -= t * r(k);
      u_plus += t;

      if (t2 <= t1) {
        if (!factor.Add(np)) {
          sol.status = QpStatus::kInfeasible;
          sol.x = x;
          sol.iterations = iter;
          return sol;
        }
        active.push_back(p);
        u.push_back(u_plus);
        added = true;
      } else {
        factor.Drop(l);
        active.erase(active.begin() + l);
        u.erase(u.begin() + l);
      }
    }
  }

  sol.x = x;
  for (size_t k = 0; k < active.size(); ++k) {
    sol.multipliers(active[k]) = u[k];
  }
  sol.active_set = active;
  sol.iterations = iter;
  sol.kkt_residual =
      QpKktResidual(hessian, gradient, a_ineq, b_ineq, x, sol.multipliers);
  return sol;
}

}  // namespace romshaper
