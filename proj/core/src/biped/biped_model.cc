#include "romshaper/biped/biped_model.h"

#include <algorithm>
#include <cmath>

namespace romshaper {

BipedModel::BipedModel(const BipedParams& params) : params_(params) {
  const auto& p = params_;
  if (!(p.torso_mass > 0 && p.torso_inertia > 0 && p.foot_mass > 0)) {
    throw std::invalid_argument("BipedModel: masses and inertia must be > 0");
  }
  if (!(p.leg_min > 0 && p.leg_min < p.leg_max)) {
    throw std::invalid_argument("BipedModel: need 0 < leg_min < leg_max");
  }
  if (!(p.friction > 0)) {
    throw std::invalid_argument("BipedModel: friction must be > 0");
  }
  if (!(p.hip_torque_max > 0 && p.leg_force_max > 0 && p.gravity > 0)) {
    throw std::invalid_argument(
        "BipedModel: torque limits and gravity must be > 0");
  }
}

Vec4 BipedModel::torque_limits() const {
  return Vec4(params_.hip_torque_max, params_.leg_force_max,
              params_.hip_torque_max, params_.leg_force_max);
}

Vec2 BipedModel::ground_normal() const {
  return Vec2(-std::sin(params_.incline), std::cos(params_.incline));
}

Vec2 BipedModel::ground_tangent() const {
  return Vec2(std::cos(params_.incline), std::sin(params_.incline));
}

double BipedModel::HeightAboveGround(const Vec2& p) const {
  return ground_normal().dot(p);
}

Vec2 BipedModel::GroundPoint(double x) const {
  return Vec2(x, x * std::tan(params_.incline));
}

Vec2 BipedModel::HipPosition(const Vec7& q) const {
  const double d = params_.hip_offset;
  return Vec2(q(kBaseX) + d * std::sin(q(kPitch)),
              q(kBaseZ) - d * std::cos(q(kPitch)));
}

Vec2 BipedModel::FootPosition(const Vec7& q, Foot foot) const {
  const double phi = q(kPitch) + q(HipIndex(foot));
  const double len = q(LegIndex(foot));
  return HipPosition(q) + len * Vec2(std::sin(phi), -std::cos(phi));
}

Mat2x7 BipedModel::FootJacobian(const Vec7& q, Foot foot) const {
  const double d = params_.hip_offset;
  const double th = q(kPitch);
  const double phi = th + q(HipIndex(foot));
  const double len = q(LegIndex(foot));
  const double sp = std::sin(phi), cp = std::cos(phi);
  Mat2x7 jac = Mat2x7::Zero();
  jac(0, kBaseX) = 1.0;
  jac(1, kBaseZ) = 1.0;
  jac(0, kPitch) = d * std::cos(th) + len * cp;
  jac(1, kPitch) = d * std::sin(th) + len * sp;
  jac(0, HipIndex(foot)) = len * cp;
  jac(1, HipIndex(foot)) = len * sp;
  jac(0, LegIndex(foot)) = sp;
  jac(1, LegIndex(foot)) = -cp;
  return jac;
}

Mat2x7 BipedModel::FootJacobianDot(const FullState& x, Foot foot) const {
  const double d = params_.hip_offset;
  const double th = x.q(kPitch);
  const double phi = th + x.q(HipIndex(foot));
  const double len = x.q(LegIndex(foot));
  const double th_dot = x.v(kPitch);
  const double phi_dot = th_dot + x.v(HipIndex(foot));
  const double len_dot = x.v(LegIndex(foot));
  const double sp = std::sin(phi), cp = std::cos(phi);
  Mat2x7 jd = Mat2x7::Zero();
  jd(0, kPitch) = -d * std::sin(th) * th_dot + len_dot * cp - len * sp * phi_dot;
  jd(1, kPitch) = d * std::cos(th) * th_dot + len_dot * sp + len * cp * phi_dot;
  jd(0, HipIndex(foot)) = len_dot * cp - len * sp * phi_dot;
  jd(1, HipIndex(foot)) = len_dot * sp + len * cp * phi_dot;
  jd(0, LegIndex(foot)) = cp * phi_dot;
  jd(1, LegIndex(foot)) = sp * phi_dot;
  return jd;
}

Kinematics<2> BipedModel::FootKinematics(const FullState& x, Foot foot) const {
  Kinematics<2> k;
  k.pos = FootPosition(x.q, foot);
  k.jac = FootJacobian(x.q, foot);
  k.vel = k.jac * x.v;
  k.jdot_v = FootJacobianDot(x, foot) * x.v;
  return k;
}

Vec2 BipedModel::ComPosition(const Vec7& q) const {
  const double mt = params_.torso_mass, mf = params_.foot_mass;
  const Vec2 torso(q(kBaseX), q(kBaseZ));
  return (mt * torso + mf * (FootPosition(q, Foot::kLeft) +
                             FootPosition(q, Foot::kRight))) /
         total_mass();
}

Kinematics<2> BipedModel::ComKinematics(const FullState& x) const {
  const double mt = params_.torso_mass, mf = params_.foot_mass;
  const double m = total_mass();
  const auto left = FootKinematics(x, Foot::kLeft);
  const auto right = FootKinematics(x, Foot::kRight);
  Mat2x7 torso_jac = Mat2x7::Zero();
  torso_jac(0, kBaseX) = 1.0;
  torso_jac(1, kBaseZ) = 1.0;
  Kinematics<2> k;
  k.pos = (mt * Vec2(x.q(kBaseX), x.q(kBaseZ)) +
           mf * (left.pos + right.pos)) / m;
  k.jac = (mt * torso_jac + mf * (left.jac + right.jac)) / m;
  k.vel = k.jac * x.v;
  k.jdot_v = mf * (left.jdot_v + right.jdot_v) / m;
  return k;
}

Mat7 BipedModel::MassMatrix(const Vec7& q) const {
  Mat7 m = Mat7::Zero();
  m(kBaseX, kBaseX) = params_.torso_mass;
  m(kBaseZ, kBaseZ) = params_.torso_mass;
  m(kPitch, kPitch) = params_.torso_inertia;
  for (Foot f : {Foot::kLeft, Foot::kRight}) {
    const Mat2x7 j = FootJacobian(q, f);
    m.noalias() += params_.foot_mass * j.transpose() * j;
  }
  return m;
}

Mat7 BipedModel::CoriolisMatrix(const FullState& x) const {
  Mat7 c = Mat7::Zero();
  for (Foot f : {Foot::kLeft, Foot::kRight}) {
    c.noalias() += params_.foot_mass * FootJacobian(x.q, f).transpose() *
                   FootJacobianDot(x, f);
  }
  return c;
}

Vec7 BipedModel::GravityForce(const Vec7& q) const {
  const Vec2 g(0.0, -params_.gravity);
  Vec7 tau = Vec7::Zero();
  tau(kBaseZ) = -params_.torso_mass * params_.gravity;
  for (Foot f : {Foot::kLeft, Foot::kRight}) {
    tau.noalias() += params_.foot_mass * FootJacobian(q, f).transpose() * g;
  }
  return tau;
}

Vec7 BipedModel::LimitForce(const FullState& x) const {
  Vec7 tau = Vec7::Zero();
  for (Foot f : {Foot::kLeft, Foot::kRight}) {
    const int i = LegIndex(f);
    const double len = x.q(i), rate = x.v(i);
    if (len < params_.leg_min) {
      tau(i) = std::max(0.0, params_.limit_stiffness * (params_.leg_min - len) -
                                 params_.limit_damping * rate);
    } else if (len > params_.leg_max) {
      tau(i) = std::min(0.0, params_.limit_stiffness * (params_.leg_max - len) -
                                 params_.limit_damping * rate);
    }
  }
  return tau;
}

Mat7x4 BipedModel::ActuationMatrix() {
  Mat7x4 b = Mat7x4::Zero();
  b(kLeftHip, 0) = 1.0;
  b(kLeftLeg, 1) = 1.0;
  b(kRightHip, 2) = 1.0;
  b(kRightLeg, 3) = 1.0;
  return b;
}

double BipedModel::KineticEnergy(const FullState& x) const {
  return 0.5 * x.v.dot(MassMatrix(x.q) * x.v);
}

double BipedModel::PotentialEnergy(const Vec7& q) const {
  return params_.gravity *
         (params_.torso_mass * q(kBaseZ) +
          params_.foot_mass * (FootPosition(q, Foot::kLeft).y() +
                               FootPosition(q, Foot::kRight).y()));
}

}  // namespace romshaper
