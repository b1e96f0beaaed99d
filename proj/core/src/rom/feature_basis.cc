#include "romshaper/rom/feature_basis.h"

#include <cmath>
#include <string>

namespace romshaper {

FeatureBasis BuildFeatureBasis(int dim_y, double min_height) {
  if (dim_y != 2 && dim_y != 3) {
    throw std::invalid_argument(
        "BuildFeatureBasis: dim_y must be 2 or 3, got " +
        std::to_string(dim_y));
  }
  if (!(min_height > 0.0)) {
    throw std::invalid_argument("BuildFeatureBasis: min_height must be > 0");
  }
  FeatureBasis basis;
  basis.dim_y_ = dim_y;
  basis.min_height_ = min_height;
  const int n = 2 * dim_y;

  auto push = [&](int a, int b) {
    std::vector<int> e(n, 0);
    if (a >= 0) ++e[a];
    if (b >= 0) ++e[b];
    basis.exponents_.push_back(std::move(e));
    basis.factors_.emplace_back(a, b);
  };
  push(-1, -1);
  for (int i = 0; i < n; ++i) push(i, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) push(i, j);
  }
  return basis;
}

void FeatureBasis::CheckHeight(const Eigen::VectorXd& y) const {
  const double height = y(dim_y_ - 1);
  if (!(std::abs(height) >= min_height_)) {
    throw DegenerateComHeight("CoM height " + std::to_string(height) +
                              " below guard " + std::to_string(min_height_));
  }
}

Eigen::VectorXd FeatureBasis::Evaluate(const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& ydot) const {
  CheckHeight(y);
  const int n = num_vars();
  Eigen::VectorXd vars(n);
  vars << y, ydot;

  Eigen::VectorXd phi(num_features());
  for (int k = 0; k < num_monomials(); ++k) {
    const auto [a, b] = factors_[k];
    double value = 1.0;
    if (a >= 0) value *= vars(a);
    if (b >= 0) value *= vars(b);
    phi(k) = value;
  }
  const double height = y(dim_y_ - 1);
  for (int i = 0; i < lip_term_count(); ++i) {
    phi(lip_feature_index(i)) = y(i) / height;
  }
  return phi;
}

Eigen::MatrixXd FeatureBasis::Jacobian(const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& ydot) const {
  CheckHeight(y);
  const int n = num_vars();
  Eigen::VectorXd vars(n);
  vars << y, ydot;

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(num_features(), n);
  for (int k = 0; k < num_monomials(); ++k) {
    const auto [a, b] = factors_[k];
    if (a < 0) continue;
    if (b < 0) {
      jac(k, a) = 1.0;
    } else {
      jac(k, a) += vars(b);
      jac(k, b) += vars(a);
    }
  }
  const int v = dim_y_ - 1;
  const double height = y(v);
  for (int i = 0; i < lip_term_count(); ++i) {
    jac(lip_feature_index(i), i) = 1.0 / height;
    jac(lip_feature_index(i), v) = -y(i) / (height * height);
  }
  return jac;
}

}  // namespace romshaper
