#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "romshaper/biped/fsm.h"
#include "romshaper/learn/task_grid.h"
#include "romshaper/rom/rom.h"

namespace romshaper {

enum class PlanStatus { kConverged, kMaxIter, kInfeasible };

const char* ToString(PlanStatus status);

struct PlannerConfig {
  /// Support phases in the horizon (current one included).
  int footsteps_in_horizon = 2;
  int knots_per_phase = 5;
  double single_support = 0.35;
  /// Max horizontal distance between a footstep and the CoM at touchdown.
  double reach_limit = 0.6;
  /// CoM height bounds relative to the stance foot.
  double min_height = 0.5;
  double max_height = 1.1;
  double velocity_weight = 1.0;
  double footstep_weight = 10.0;
  double accel_weight = 1e-3;
  double penalty_weight = 1e4;
  /// k_v of the nominal footstep p = p_com + v T/2 + k_v (v - v_des).
  double raibert_gain = 0.15;
  int max_iterations = 20;
  double tolerance = 1e-8;
};

/// Planned CoM knots and footsteps. Knot states are relative to the stance
/// foot active at that knot; knot times are relative to the solve time.
struct PlanSolution {
  std::vector<double> knot_times;
  std::vector<RomState> com_knots;
  std::vector<Vec2> knot_stance;
  /// Number of knots belonging to the current support phase.
  int current_phase_knots = 0;
  Vec2 next_footstep = Vec2::Zero();
  std::vector<Vec2> footsteps;
  PlanStatus solve_status = PlanStatus::kConverged;
  int iterations = 0;
  int step_index = 0;
  double first_phase_duration = 0.0;
  /// Raw decision vector, reused as a warm start.
  Eigen::VectorXd decision;
};

/// Data of one transcription: fixed initial state, phase durations and cost
/// targets. Decision layout: for each phase, K knots of z = (y, ydot), then
/// the horizontal position of every future footstep.
struct TranscriptionProblem {
  RomState y0;
  Vec2 stance0 = Vec2::Zero();
  std::vector<double> phase_durations;
  int knots = 5;
  double incline = 0.0;
  /// Desired average CoM velocity along the ground.
  double desired_speed = 0.0;
  double stride = 0.0;
  double nominal_first_step_x = 0.0;
  double reach_limit = 0.6;
  double min_height = 0.5;
  double max_height = 1.1;
  double velocity_weight = 1.0;
  double footstep_weight = 10.0;
  double accel_weight = 1e-3;
  double penalty_weight = 1e4;

  int num_phases() const { return static_cast<int>(phase_durations.size()); }
  int state_dim() const { return 2 * static_cast<int>(y0.y.size()); }
  int num_decisions() const {
    return num_phases() * knots * state_dim() + num_phases() - 1;
  }
  int KnotOffset(int phase, int knot) const {
    return (phase * knots + knot) * state_dim();
  }
  int FootstepOffset(int footstep) const {
    return num_phases() * knots * state_dim() + footstep - 1;
  }
  Vec2 FootstepPosition(const Eigen::VectorXd& decision, int footstep) const;
};

/// Hard constraints c(x) = 0 (initial state, Hermite-Simpson defects scaled
/// by 1/h, phase transitions) and least-squares residuals r(x) (velocity
/// tracking, footstep regularization, acceleration effort, one-sided
/// reach/height penalties), each with its analytic Jacobian.
struct TranscriptionEval {
  Eigen::VectorXd constraints;
  Eigen::MatrixXd constraint_jac;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd residual_jac;
};

TranscriptionEval TranscriptionResiduals(const RomParams& params,
                                         const Eigen::VectorXd& decision,
                                         const TranscriptionProblem& problem);

/// Forward-integrates the ROM (RK4) through every phase with the given
/// footstep x positions to produce a decision vector.
Eigen::VectorXd RolloutDecision(const RomParams& params,
                                const TranscriptionProblem& problem,
                                const std::vector<double>& footstep_x);

/// Solves the receding-horizon ROM trajectory optimization for the current
/// support phase plus footsteps_in_horizon - 1 future phases.
PlanSolution Plan(const RomParams& params, const RomState& y0,
                  const Vec2& stance_pos, const FsmState& fsm,
                  const Task& task, const PlannerConfig& config,
                  const PlanSolution* warm = nullptr);

/// Desired CoM (world frame) at time t since the solve, by cubic Hermite
/// interpolation of the world-frame knots; t is clamped to the horizon.
/// `relative` is measured from the stance foot active at the sample.
struct ComSample {
  Vec2 pos;
  Vec2 vel;
  RomState relative;
};
ComSample SampleComPlan(const PlanSolution& plan, double t);

}  // namespace romshaper
