#include "romshaper/rom/rom.h"

#include <stdexcept>
#include <string>

namespace romshaper {

Eigen::VectorXd RomState::Stacked() const {
  Eigen::VectorXd z(2 * y.size());
  z << y, ydot;
  return z;
}

RomState RomState::FromStacked(const Eigen::VectorXd& z) {
  const Eigen::Index d = z.size() / 2;
  return RomState(z.head(d), z.tail(d));
}

RomParams::RomParams(FeatureBasis basis)
    : basis_(std::move(basis)),
      theta_(Eigen::MatrixXd::Zero(basis_.dim_y(), basis_.num_features())) {}

RomParams::RomParams(FeatureBasis basis, Eigen::MatrixXd theta)
    : basis_(std::move(basis)), theta_(std::move(theta)) {
  if (theta_.rows() != basis_.dim_y() ||
      theta_.cols() != basis_.num_features()) {
    throw std::invalid_argument("RomParams: theta shape does not match basis");
  }
  if (!theta_.allFinite()) {
    throw std::invalid_argument("RomParams: theta has non-finite entries");
  }
}

Eigen::VectorXd RomParams::Flatten() const {
  Eigen::VectorXd flat(theta_.size());
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < theta_.rows(); ++r) {
    for (Eigen::Index c = 0; c < theta_.cols(); ++c) flat(k++) = theta_(r, c);
  }
  return flat;
}

RomParams RomParams::WithFlat(const Eigen::VectorXd& flat) const {
  if (flat.size() != theta_.size()) {
    throw std::invalid_argument("RomParams::WithFlat: expected " +
                                std::to_string(theta_.size()) +
                                " parameters, got " +
                                std::to_string(flat.size()));
  }
  Eigen::MatrixXd theta(theta_.rows(), theta_.cols());
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < theta.rows(); ++r) {
    for (Eigen::Index c = 0; c < theta.cols(); ++c) theta(r, c) = flat(k++);
  }
  return RomParams(basis_, std::move(theta));
}

Eigen::VectorXd RomAccel(const RomParams& params, const RomState& s) {
  return params.theta() * params.basis().Evaluate(s.y, s.ydot);
}

void RomVectorField(const RomParams& params, const Eigen::VectorXd& z,
                    Eigen::VectorXd* f, Eigen::MatrixXd* dfdz) {
  const int d = params.dim_y();
  const Eigen::VectorXd y = z.head(d);
  const Eigen::VectorXd ydot = z.tail(d);
  if (f != nullptr) {
    f->resize(2 * d);
    f->head(d) = ydot;
    f->tail(d) = params.theta() * params.basis().Evaluate(y, ydot);
  }
  if (dfdz != nullptr) {
    dfdz->setZero(2 * d, 2 * d);
    dfdz->topRightCorner(d, d).setIdentity();
    dfdz->bottomRows(d) = params.theta() * params.basis().Jacobian(y, ydot);
  }
}

RomParams LipInit(double gravity, int dim_y) {
  RomParams params(BuildFeatureBasis(dim_y));
  for (int i = 0; i < dim_y - 1; ++i) {
    params.mutable_theta()(i, params.basis().lip_feature_index(i)) = gravity;
  }
  return params;
}

}  // namespace romshaper
