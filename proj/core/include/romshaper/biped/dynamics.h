#pragma once

#include <array>
#include <optional>
#include <stdexcept>

#include "romshaper/biped/biped_model.h"

namespace romshaper {

/// A contact constraint was rank deficient.
class SingularContactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN/Inf appeared in the integrated state.
class SimulationDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Active point contacts with their world anchor positions.
struct ContactMode {
  std::array<std::optional<Vec2>, 2> anchor;

  static ContactMode None() { return {}; }
  static ContactMode Single(Foot foot, const Vec2& at) {
    ContactMode c;
    c.anchor[static_cast<int>(foot)] = at;
    return c;
  }
  static ContactMode Double(const Vec2& left, const Vec2& right) {
    ContactMode c;
    c.anchor[0] = left;
    c.anchor[1] = right;
    return c;
  }
  bool active(Foot foot) const {
    return anchor[static_cast<int>(foot)].has_value();
  }
  int count() const {
    return static_cast<int>(anchor[0].has_value()) +
           static_cast<int>(anchor[1].has_value());
  }
};

struct DynamicsResult {
  Vec7 vdot = Vec7::Zero();
  /// World-frame contact force per foot (zero when inactive).
  std::array<Vec2, 2> contact_force{Vec2::Zero(), Vec2::Zero()};
};

/// Contact-constrained forward dynamics
///   M vdot + C v = G + L + B u + Jc^T lambda,
///   Jc vdot + Jcdot v = -2 w Jc v - w^2 (p_c - anchor),
/// with w = baumgarte_omega (0 gives the unstabilized index-reduced DAE).
DynamicsResult Dynamics(const BipedModel& model, const FullState& x,
                        const TorqueCommand& u, const ContactMode& contacts,
                        double baumgarte_omega = 0.0);

inline constexpr double kDefaultBaumgarteOmega = 20.0;
inline constexpr double kDefaultSimDt = 1e-3;

/// v advances by explicit Euler, then q by the mean of old and new v (exact
/// under uniform gravity). Throws SimulationDiverged.
FullState IntegrateStep(const BipedModel& model, const FullState& x,
                        const TorqueCommand& u, const ContactMode& contacts,
                        double dt = kDefaultSimDt,
                        double baumgarte_omega = kDefaultBaumgarteOmega);

/// Plastic impact of `new_contact` with the ground: q is unchanged and the
/// post-impact velocity is the M-orthogonal projection onto Jc v = 0.
FullState ImpactMap(const BipedModel& model, const FullState& x,
                    Foot new_contact);

/// Base below 0.4 m above local ground or |pitch| > 1 rad.
bool IsFallen(const BipedModel& model, const FullState& x);

/// Stacked contact Jacobian and Jdot*v of the active contacts, in foot order.
void ContactJacobian(const BipedModel& model, const FullState& x,
                     const ContactMode& contacts, Eigen::MatrixXd* jc,
                     Eigen::VectorXd* jdot_v, Eigen::VectorXd* position_error);

}  // namespace romshaper
