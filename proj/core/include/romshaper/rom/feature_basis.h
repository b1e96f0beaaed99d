#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace romshaper {

/// Thrown when the LIP feature would divide by a CoM height below the guard.
class DegenerateComHeight : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Monomials of degree <= 2 over the ROM state (y, ydot), graded
/// lexicographic, followed by one pendular term y_h / y_v per horizontal
/// CoM coordinate. The vertical coordinate is always the last entry of y.
///
/// Variables are indexed 0..2*dim_y-1 as (y_0, ..., y_{d-1}, ydot_0, ...).
class FeatureBasis {
 public:
  static constexpr double kDefaultMinHeight = 0.2;

  FeatureBasis() = default;

  int dim_y() const { return dim_y_; }
  int num_vars() const { return 2 * dim_y_; }
  int num_monomials() const { return static_cast<int>(exponents_.size()); }
  int lip_term_count() const { return dim_y_ - 1; }
  int num_features() const { return num_monomials() + lip_term_count(); }
  double min_height() const { return min_height_; }

  /// Exponent tuple (length 2*dim_y) of each monomial, in feature order.
  const std::vector<std::vector<int>>& monomial_exponents() const {
    return exponents_;
  }
  /// Index of the feature g * y_i / y_v for horizontal coordinate i.
  int lip_feature_index(int horizontal_coord) const {
    return num_monomials() + horizontal_coord;
  }

  /// phi(y, ydot). Throws DegenerateComHeight if |y_v| < min_height.
  Eigen::VectorXd Evaluate(const Eigen::VectorXd& y,
                           const Eigen::VectorXd& ydot) const;

  /// d phi / d(y, ydot), num_features x 2*dim_y.
  Eigen::MatrixXd Jacobian(const Eigen::VectorXd& y,
                           const Eigen::VectorXd& ydot) const;

  bool operator==(const FeatureBasis& other) const {
    return dim_y_ == other.dim_y_ && min_height_ == other.min_height_;
  }

 private:
  friend FeatureBasis BuildFeatureBasis(int dim_y, double min_height);

  void CheckHeight(const Eigen::VectorXd& y) const;

  int dim_y_ = 0;
  double min_height_ = kDefaultMinHeight;
  std::vector<std::vector<int>> exponents_;
  // Variable indices of each monomial's factors, -1 where absent.
  std::vector<std::pair<int, int>> factors_;
};

/// dim_y must be 2 (planar) or 3 (spatial).
FeatureBasis BuildFeatureBasis(
    int dim_y, double min_height = FeatureBasis::kDefaultMinHeight);

}  // namespace romshaper
