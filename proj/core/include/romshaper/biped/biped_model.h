#pragma once

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

namespace romshaper {

inline constexpr int kNq = 7;
inline constexpr int kNu = 4;

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Matrix<double, kNu, 1>;
using Vec7 = Eigen::Matrix<double, kNq, 1>;
using Mat7 = Eigen::Matrix<double, kNq, kNq>;
using Mat2x7 = Eigen::Matrix<double, 2, kNq>;
using Mat7x4 = Eigen::Matrix<double, kNq, kNu>;
using Row7 = Eigen::Matrix<double, 1, kNq>;

/// Generalized coordinate indices of the planar biped.
enum Coord : int {
  kBaseX = 0,
  kBaseZ = 1,
  kPitch = 2,
  kLeftHip = 3,
  kLeftLeg = 4,
  kRightHip = 5,
  kRightLeg = 6,
};

enum class Foot : int { kLeft = 0, kRight = 1 };

inline Foot Other(Foot f) {
  return f == Foot::kLeft ? Foot::kRight : Foot::kLeft;
}
inline int HipIndex(Foot f) { return 3 + 2 * static_cast<int>(f); }
inline int LegIndex(Foot f) { return 4 + 2 * static_cast<int>(f); }
/// Actuator order: left hip torque, left leg force, right hip, right leg.
inline int HipActuator(Foot f) { return 2 * static_cast<int>(f); }
inline int LegActuator(Foot f) { return 2 * static_cast<int>(f) + 1; }

struct FullState {
  Vec7 q = Vec7::Zero();
  Vec7 v = Vec7::Zero();
  double t = 0.0;
};

struct TorqueCommand {
  Vec4 u = Vec4::Zero();
};

struct BipedParams {
  double torso_mass = 10.0;
  double torso_inertia = 1.0;
  double foot_mass = 0.5;
  /// Distance of the hip joint below the torso CoM along the torso axis.
  double hip_offset = 0.1;
  double leg_min = 0.5;
  double leg_max = 1.1;
  double hip_torque_max = 60.0;
  double leg_force_max = 300.0;
  double gravity = 9.81;
  double friction = 0.8;
  /// Ground incline (rad); the ground line passes through the world origin.
  double incline = 0.0;
  double limit_stiffness = 2.0e4;
  double limit_damping = 100.0;
};

/// Position, velocity, Jacobian and Jdot*v of a point or scalar output.
template <int Dim>
struct Kinematics {
  Eigen::Matrix<double, Dim, 1> pos;
  Eigen::Matrix<double, Dim, 1> vel;
  Eigen::Matrix<double, Dim, kNq> jac;
  Eigen::Matrix<double, Dim, 1> jdot_v;
};

/// Planar floating-base biped: a rigid torso, two massless telescoping legs
/// on revolute hips, and point-mass feet.
///
/// q = [x, z, pitch, hip_L, leg_L, hip_R, leg_R]; hip angles are relative to
/// the torso, and the foot of a leg with absolute angle phi = pitch + hip sits
/// at hip + len * (sin phi, -cos phi). Gravity is world-vertical; the ground
/// is the line through the origin tilted by `incline`.
class BipedModel {
 public:
  BipedModel() : BipedModel(BipedParams{}) {}
  explicit BipedModel(const BipedParams& params);

  const BipedParams& params() const { return params_; }
  double total_mass() const {
    return params_.torso_mass + 2.0 * params_.foot_mass;
  }
  Vec4 torque_limits() const;

  /// Outward ground normal and downhill-to-uphill tangent.
  Vec2 ground_normal() const;
  Vec2 ground_tangent() const;
  /// Signed distance of a point from the ground, along the normal.
  double HeightAboveGround(const Vec2& p) const;
  /// Point on the ground at horizontal position x.
  Vec2 GroundPoint(double x) const;

  Vec2 HipPosition(const Vec7& q) const;
  Vec2 FootPosition(const Vec7& q, Foot foot) const;
  Mat2x7 FootJacobian(const Vec7& q, Foot foot) const;
  Kinematics<2> FootKinematics(const FullState& x, Foot foot) const;
  /// Time derivative of the foot Jacobian.
  Mat2x7 FootJacobianDot(const FullState& x, Foot foot) const;

  Vec2 ComPosition(const Vec7& q) const;
  Kinematics<2> ComKinematics(const FullState& x) const;

  Mat7 MassMatrix(const Vec7& q) const;
  /// Coriolis matrix C with Mdot - 2C skew-symmetric.
  Mat7 CoriolisMatrix(const FullState& x) const;
  /// Generalized gravity force (appears on the right-hand side).
  Vec7 GravityForce(const Vec7& q) const;
  /// One-sided spring-damper forces keeping leg lengths in [leg_min, leg_max].
  Vec7 LimitForce(const FullState& x) const;
  /// Actuation matrix B.
  static Mat7x4 ActuationMatrix();

  double KineticEnergy(const FullState& x) const;
  double PotentialEnergy(const Vec7& q) const;

 private:
  BipedParams params_;
};

}  // namespace romshaper
