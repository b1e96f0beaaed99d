#include "romshaper/control/osc.h"

#include <algorithm>
#include <cmath>

namespace romshaper {

const char* ToString(OutputKind kind) {
  switch (kind) {
    case OutputKind::kCom:
      return "com";
    case OutputKind::kSwingFoot:
      return "swing_foot";
    case OutputKind::kTorsoPitch:
      return "torso_pitch";
    case OutputKind::kStanceLegLength:
      return "stance_leg";
    case OutputKind::kSwingLegLength:
      return "swing_leg";
  }
  return "?";
}

OutputKinematics EvalOutput(const BipedModel& model, const FullState& x,
                            OutputKind kind, Foot foot) {
  OutputKinematics k;
  switch (kind) {
    case OutputKind::kCom: {
      const auto com = model.ComKinematics(x);
      k.pos = com.pos;
      k.vel = com.vel;
      k.jac = com.jac;
      k.jdot_v = com.jdot_v;
      break;
    }
    case OutputKind::kSwingFoot: {
      const auto f = model.FootKinematics(x, foot);
      k.pos = f.pos;
      k.vel = f.vel;
      k.jac = f.jac;
      k.jdot_v = f.jdot_v;
      break;
    }
    case OutputKind::kTorsoPitch:
    case OutputKind::kStanceLegLength:
    case OutputKind::kSwingLegLength: {
      const int idx = kind == OutputKind::kTorsoPitch ? kPitch : LegIndex(foot);
      k.pos = Eigen::VectorXd::Constant(1, x.q(idx));
      k.vel = Eigen::VectorXd::Constant(1, x.v(idx));
      k.jac = Eigen::MatrixXd::Zero(1, kNq);
      k.jac(0, idx) = 1.0;
      k.jdot_v = Eigen::VectorXd::Zero(1);
      break;
    }
  }
  return k;
}

Eigen::VectorXd DesiredAcceleration(const BipedModel& model,
                                    const FullState& x,
                                    const TrackedOutput& out) {
  const auto k = EvalOutput(model, x, out.kind, out.foot);
  return PdDesiredAccel(out.pos_des, out.vel_des, out.acc_ff, k.pos, k.vel,
                        out.gains);
}

OscResult OscSolve(const BipedModel& model, const FullState& x,
                   const DesiredOutputs& outputs, const ContactMode& contacts,
                   const OscConfig& config) {
  const Mat7 mass = model.MassMatrix(x.q);
  const Eigen::LLT<Mat7> mass_llt(mass);
  const Vec7 passive = model.GravityForce(x.q) + model.LimitForce(x) -
                       model.CoriolisMatrix(x) * x.v;
  const Mat7x4 actuation = BipedModel::ActuationMatrix();
  const Mat7x4 minv_b = mass_llt.solve(actuation);
  const Vec7 minv_p = mass_llt.solve(passive);

  // vdot = A u + b, lambda = Lu u + l0.
  Eigen::Matrix<double, kNq, kNu> acc_u = minv_b;
  Vec7 acc_0 = minv_p;
  const int nc = contacts.count();
  Eigen::MatrixXd lam_u(2 * nc, kNu);
  Eigen::VectorXd lam_0(2 * nc);
  Eigen::MatrixXd jc;
  if (nc > 0) {
    Eigen::VectorXd jdot_v, err;
    ContactJacobian(model, x, contacts, &jc, &jdot_v, &err);
    const Eigen::MatrixXd minv_jt = mass_llt.solve(jc.transpose());
    const Eigen::MatrixXd schur = jc * minv_jt;
    const Eigen::LDLT<Eigen::MatrixXd> schur_ldlt(schur);
    if (schur_ldlt.info() != Eigen::Success ||
        schur_ldlt.vectorD().cwiseAbs().minCoeff() <=
            1e-12 * schur.diagonal().cwiseAbs().maxCoeff()) {
      throw SingularContactError("OscSolve: contact constraint is singular");
    }
    const double w = config.baumgarte_omega;
    const Eigen::VectorXd target =
        -jdot_v - 2.0 * w * (jc * x.v) - w * w * err;
    lam_u = -schur_ldlt.solve(jc * minv_b);
    lam_0 = schur_ldlt.solve(target - jc * minv_p);
    acc_u += minv_jt * lam_u;
    acc_0 += minv_jt * lam_0;
  }

  Eigen::MatrixXd hessian =
      2.0 * config.effort_weight * Eigen::MatrixXd::Identity(kNu, kNu);
  Eigen::VectorXd gradient = Eigen::VectorXd::Zero(kNu);
  for (const auto& out : outputs.outputs) {
    if (out.weight <= 0.0) continue;
    const auto k = EvalOutput(model, x, out.kind, out.foot);
    const Eigen::VectorXd a_des = PdDesiredAccel(
        out.pos_des, out.vel_des, out.acc_ff, k.pos, k.vel, out.gains);
    const Eigen::MatrixXd ja = k.jac * acc_u;
    const Eigen::VectorXd r0 = k.jac * acc_0 + k.jdot_v - a_des;
    hessian.noalias() += 2.0 * out.weight * ja.transpose() * ja;
    gradient.noalias() += 2.0 * out.weight * ja.transpose() * r0;
  }

  const Vec4 u_max = model.torque_limits();
  const int n_box = 2 * kNu;
  const int n_fric = 3 * nc;
  Eigen::MatrixXd a_ineq(n_box + n_fric, kNu);
  Eigen::VectorXd b_ineq(n_box + n_fric);
  a_ineq.topRows(kNu).setIdentity();
  b_ineq.head(kNu) = -u_max;
  a_ineq.middleRows(kNu, kNu) = -Eigen::MatrixXd::Identity(kNu, kNu);
  b_ineq.segment(kNu, kNu) = -u_max;
  const Vec2 normal = model.ground_normal();
  const Vec2 tangent = model.ground_tangent();
  const double mu = model.params().friction;
  for (int c = 0; c < nc; ++c) {
    const Eigen::MatrixXd lu = lam_u.middleRows(2 * c, 2);
    const Eigen::Vector2d l0 = lam_0.segment<2>(2 * c);
    const Eigen::RowVectorXd n_row = normal.transpose() * lu;
    const Eigen::RowVectorXd t_row = tangent.transpose() * lu;
    const double n0 = normal.dot(l0), t0 = tangent.dot(l0);
    const int r = n_box + 3 * c;
    a_ineq.row(r) = n_row;
    b_ineq(r) = -n0;
    a_ineq.row(r + 1) = mu * n_row - t_row;
    b_ineq(r + 1) = -(mu * n0 - t0);
    a_ineq.row(r + 2) = mu * n_row + t_row;
    b_ineq(r + 2) = -(mu * n0 + t0);
  }

  OscResult result;
  QpSolution qp = SolveDenseQp(hessian, gradient, a_ineq, b_ineq);
  int rows_used = n_box + n_fric;
  if (qp.status == QpStatus::kInfeasible && n_fric > 0) {
    qp = SolveDenseQp(hessian, gradient, a_ineq.topRows(n_box),
                      b_ineq.head(n_box));
    result.friction_relaxed = true;
    rows_used = n_box;
  }
  if (qp.status != QpStatus::kOptimal) {
    throw OscError(std::string("OscSolve: QP failed (") +
                       ToString(qp.status) + ")",
                   qp.status, qp.iterations);
  }

  const Vec4 u = qp.x;
  result.u.u = u.cwiseMax(-u_max).cwiseMin(u_max);
  result.status = qp.status;
  result.iterations = qp.iterations;
  result.kkt_residual = qp.kkt_residual;
  result.vdot = acc_u * result.u.u + acc_0;
  result.min_inequality_slack =
      (a_ineq.topRows(rows_used) * result.u.u - b_ineq.head(rows_used))
          .minCoeff();

  Vec7 generalized = actuation * result.u.u + passive;
  if (nc > 0) {
    const Eigen::VectorXd lambda = lam_u * result.u.u + lam_0;
    generalized += jc.transpose() * lambda;
    int row = 0;
    for (Foot f : {Foot::kLeft, Foot::kRight}) {
      if (!contacts.active(f)) continue;
      result.contact_force[static_cast<int>(f)] = lambda.segment<2>(row);
      row += 2;
    }
  }
  result.dynamics_residual =
      (mass * result.vdot - generalized).cwiseAbs().maxCoeff();
  return result;
}

}  // namespace romshaper
