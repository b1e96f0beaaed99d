#pragma once

#include <vector>

#include <Eigen/Dense>

namespace romshaper {

enum class QpStatus { kOptimal, kInfeasible, kMaxIterations, kNotConvex };

const char* ToString(QpStatus status);

struct QpSolution {
  QpStatus status = QpStatus::kOptimal;
  Eigen::VectorXd x;
  /// One multiplier per inequality row (zero when inactive).
  Eigen::VectorXd multipliers;
  std::vector<int> active_set;
  int iterations = 0;
  /// max(stationarity, primal infeasibility, complementarity).
  double kkt_residual = 0.0;
};

/// Strictly convex dense QP
///   min 0.5 x'Hx + g'x   s.t.   A x >= b
/// solved with the Goldfarb-Idnani dual active-set method. H must be
/// positive definite; no feasible starting point is needed.
QpSolution SolveDenseQp(const Eigen::MatrixXd& hessian,
                        const Eigen::VectorXd& gradient,
                        const Eigen::MatrixXd& a_ineq,
                        const Eigen::VectorXd& b_ineq, int max_iterations = 0);

/// KKT residual of (x, multipliers) for the same problem.
double QpKktResidual(const Eigen::MatrixXd& hessian,
                     const Eigen::VectorXd& gradient,
                     const Eigen::MatrixXd& a_ineq,
                     const Eigen::VectorXd& b_ineq, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& multipliers);

}  // namespace romshaper
