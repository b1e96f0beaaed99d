#include "romshaper/biped/dynamics.h"

#include <cmath>
#include <string>

namespace romshaper {

void ContactJacobian(const BipedModel& model, const FullState& x,
                     const ContactMode& contacts, Eigen::MatrixXd* jc,
                     Eigen::VectorXd* jdot_v, Eigen::VectorXd* position_error) {
  const int nc = contacts.count();
  jc->resize(2 * nc, kNq);
  jdot_v->resize(2 * nc);
  if (position_error != nullptr) position_error->resize(2 * nc);
  int row = 0;
  for (Foot f : {Foot::kLeft, Foot::kRight}) {
    if (!contacts.active(f)) continue;
    const auto k = model.FootKinematics(x, f);
    jc->middleRows(row, 2) = k.jac;
    jdot_v->segment(row, 2) = k.jdot_v;
    if (position_error != nullptr) {
      position_error->segment(row, 2) =
          k.pos - *contacts.anchor[static_cast<int>(f)];
    }
    row += 2;
  }
}

DynamicsResult Dynamics(const BipedModel& model, const FullState& x,
                        const TorqueCommand& u, const ContactMode& contacts,
                        double baumgarte_omega) {
  const Mat7 mass = model.MassMatrix(x.q);
  const Vec7 rhs = model.GravityForce(x.q) + model.LimitForce(x) +
                   BipedModel::ActuationMatrix() * u.u -
                   model.CoriolisMatrix(x) * x.v;
  const Eigen::LLT<Mat7> mass_llt(mass);
  if (mass_llt.info() != Eigen::Success) {
    throw SingularContactError("Dynamics: mass matrix not positive definite");
  }

  DynamicsResult out;
  const Vec7 vdot_free = mass_llt.solve(rhs);
  if (contacts.count() == 0) {
    out.vdot = vdot_free;
    return out;
  }

  Eigen::MatrixXd jc;
  Eigen::VectorXd jdot_v, err;
  ContactJacobian(model, x, contacts, &jc, &jdot_v, &err);
  const Eigen::MatrixXd minv_jt = mass_llt.solve(jc.transpose());
  const Eigen::MatrixXd schur = jc * minv_jt;
  const Eigen::LDLT<Eigen::MatrixXd> schur_ldlt(schur);
  const double scale = schur.diagonal().cwiseAbs().maxCoeff();
  if (schur_ldlt.info() != Eigen::Success ||
      schur_ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-12 * scale) {
    throw SingularContactError("Dynamics: contact constraint is singular");
  }
  const double w = baumgarte_omega;
  const Eigen::VectorXd target =
      -jdot_v - 2.0 * w * (jc * x.v) - w * w * err;
  const Eigen::VectorXd lambda = schur_ldlt.solve(target - jc * vdot_free);
  out.vdot = vdot_free + minv_jt * lambda;

  int row = 0;
  for (Foot f : {Foot::kLeft, Foot::kRight}) {
    if (!contacts.active(f)) continue;
    out.contact_force[static_cast<int>(f)] = lambda.segment<2>(row);
    row += 2;
  }
  return out;
}

FullState IntegrateStep(const BipedModel& model, const FullState& x,
                        const TorqueCommand& u, const ContactMode& contacts,
                        double dt, double baumgarte_omega) {
  const DynamicsResult dyn = Dynamics(model, x, u, contacts, baumgarte_omega);
  FullState next;
  next.v = x.v + dt * dyn.vdot;
  next.q = x.q + (0.5 * dt) * (x.v + next.v);
  next.t = x.t + dt;
  if (!next.q.allFinite() || !next.v.allFinite()) {
    throw SimulationDiverged("IntegrateStep: non-finite state at t=" +
                             std::to_string(next.t));
  }
  return next;
}

FullState ImpactMap(const BipedModel& model, const FullState& x,
                    Foot new_contact) {
  const Mat7 mass = model.MassMatrix(x.q);
  const Eigen::LLT<Mat7> mass_llt(mass);
  const Mat2x7 jc = model.FootJacobian(x.q, new_contact);
  const Eigen::Matrix<double, kNq, 2> minv_jt = mass_llt.solve(jc.transpose());
  const Eigen::Matrix2d schur = jc * minv_jt;
  const Eigen::LDLT<Eigen::Matrix2d> schur_ldlt(schur);
  if (schur_ldlt.info() != Eigen::Success ||
      schur_ldlt.vectorD().cwiseAbs().minCoeff() <=
          1e-12 * schur.diagonal().cwiseAbs().maxCoeff()) {
    throw SingularContactError("ImpactMap: singular impact system");
  }
  FullState out = x;
  const Vec2 impulse = schur_ldlt.solve(jc * x.v);
  out.v = x.v - minv_jt * impulse;
  return out;
}

bool IsFallen(const BipedModel& model, const FullState& x) {
  const double ground_z = model.GroundPoint(x.q(kBaseX)).y();
  return x.q(kBaseZ) - ground_z < 0.4 || std::abs(x.q(kPitch)) > 1.0;
}

}  // namespace romshaper
