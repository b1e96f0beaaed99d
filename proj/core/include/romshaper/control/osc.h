#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "romshaper/biped/dynamics.h"
#include "romshaper/control/dense_qp.h"
#include "romshaper/control/pd.h"

namespace romshaper {

enum class OutputKind {
  kCom,
  kSwingFoot,
  kTorsoPitch,
  kStanceLegLength,
  kSwingLegLength,
};

const char* ToString(OutputKind kind);

/// One task-space output tracked by the OSC. Positions are world frame.
struct TrackedOutput {
  OutputKind kind = OutputKind::kCom;
  /// Leg the output refers to (swing foot, leg-length regularizers).
  Foot foot = Foot::kLeft;
  Eigen::VectorXd pos_des;
  Eigen::VectorXd vel_des;
  Eigen::VectorXd acc_ff;
  PdGains gains;
  double weight = 0.0;
};

struct DesiredOutputs {
  std::vector<TrackedOutput> outputs;
};

/// Measured value, Jacobian and Jdot*v of an output.
struct OutputKinematics {
  Eigen::VectorXd pos;
  Eigen::VectorXd vel;
  Eigen::MatrixXd jac;
  Eigen::VectorXd jdot_v;
};

OutputKinematics EvalOutput(const BipedModel& model, const FullState& x,
                            OutputKind kind, Foot foot);

/// PD-corrected acceleration command of an output.
Eigen::VectorXd DesiredAcceleration(const BipedModel& model,
                                    const FullState& x,
                                    const TrackedOutput& out);

struct OscConfig {
  /// rho_u in the effort term rho_u |u|^2.
  double effort_weight = 1e-4;
  double baumgarte_omega = kDefaultBaumgarteOmega;
};

/// Torque command plus the accelerations and contact forces it implies.
struct OscResult {
  TorqueCommand u;
  Vec7 vdot = Vec7::Zero();
  std::array<Vec2, 2> contact_force{Vec2::Zero(), Vec2::Zero()};
  QpStatus status = QpStatus::kOptimal;
  int iterations = 0;
  double kkt_residual = 0.0;
  /// |M vdot + C v - G - L - B u - Jc' lambda|_inf.
  double dynamics_residual = 0.0;
  /// Smallest slack over torque-box and friction-cone rows (>= 0 feasible).
  double min_inequality_slack = 0.0;
  /// The friction cone was dropped because it was infeasible with the box.
  bool friction_relaxed = false;
};

/// Thrown when the QP fails numerically; carries the solver diagnostics.
class OscError : public std::runtime_error {
 public:
  OscError(const std::string& what, QpStatus status, int iterations)
      : std::runtime_error(what), status_(status), iterations_(iterations) {}
  QpStatus status() const { return status_; }
  int iterations() const { return iterations_; }

 private:
  QpStatus status_;
  int iterations_;
};

/// Operational-space control QP over (vdot, u, lambda):
///   min  sum_i w_i |J_i vdot + Jdot_i v - a_des_i|^2 + rho_u |u|^2
///   s.t. full constrained dynamics with Baumgarte-stabilized contacts,
///        |u| <= u_max, lambda_n >= 0, |lambda_t| <= mu lambda_n.
/// vdot and lambda are affine in u, so the QP is solved over u.
OscResult OscSolve(const BipedModel& model, const FullState& x,
                   const DesiredOutputs& outputs, const ContactMode& contacts,
                   const OscConfig& config = {});

}  // namespace romshaper
