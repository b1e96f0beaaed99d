#pragma once

#include <Eigen/Dense>

#include "romshaper/rom/feature_basis.h"

namespace romshaper {

/// CoM position (horizontal..., vertical) relative to the stance foot and its
/// time derivative.
struct RomState {
  Eigen::VectorXd y;
  Eigen::VectorXd ydot;

  RomState() = default;
  RomState(Eigen::VectorXd y_in, Eigen::VectorXd ydot_in)
      : y(std::move(y_in)), ydot(std::move(ydot_in)) {}

  int dim() const { return static_cast<int>(y.size()); }
  /// Stacked (y, ydot).
  Eigen::VectorXd Stacked() const;
  static RomState FromStacked(const Eigen::VectorXd& z);
};

/// Learnable ROM dynamics ydd = Theta * phi(y, ydot). The ROM has no input.
class RomParams {
 public:
  RomParams() = default;
  /// Zero Theta over the given basis.
  explicit RomParams(FeatureBasis basis);
  RomParams(FeatureBasis basis, Eigen::MatrixXd theta);

  const FeatureBasis& basis() const { return basis_; }
  const Eigen::MatrixXd& theta() const { return theta_; }
  Eigen::MatrixXd& mutable_theta() { return theta_; }
  int dim_y() const { return basis_.dim_y(); }
  int input_dim() const { return 0; }
  int num_params() const { return static_cast<int>(theta_.size()); }

  /// Row-major flattening of Theta.
  Eigen::VectorXd Flatten() const;
  /// Inverse of Flatten for the same basis. Rejects non-finite entries.
  RomParams WithFlat(const Eigen::VectorXd& flat) const;

 private:
  FeatureBasis basis_;
  Eigen::MatrixXd theta_;
};

Eigen::VectorXd RomAccel(const RomParams& params, const RomState& s);

/// ROM state derivative f(z) = (ydot, Theta phi) and its Jacobian in z.
void RomVectorField(const RomParams& params, const Eigen::VectorXd& z,
                    Eigen::VectorXd* f, Eigen::MatrixXd* dfdz);

/// Linear inverted pendulum: g on the pendular feature of every horizontal
/// row, zero vertical acceleration.
RomParams LipInit(double gravity, int dim_y = 2);

}  // namespace romshaper
