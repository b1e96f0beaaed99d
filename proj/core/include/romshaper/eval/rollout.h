#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "romshaper/biped/dynamics.h"
#include "romshaper/biped/fsm.h"
#include "romshaper/control/osc.h"
#include "romshaper/control/regularization.h"
#include "romshaper/control/rom_planner.h"
#include "romshaper/eval/reward.h"
#include "romshaper/learn/task_grid.h"
#include "romshaper/rom/rom.h"

namespace romshaper {

struct EpisodeConfig {
  /// Horizon T in planner ticks.
  int horizon = 100;
  double planner_rate = 20.0;
  double sim_rate = 1000.0;
  /// Double-support settle before t = 0, excluded from rewards.
  double settle_time = 0.1;
  /// CoM height of the initial stance.
  double initial_com_height = 0.9;
  std::uint64_t seed = 0;

  int substeps() const;
  double sim_dt() const { return 1.0 / sim_rate; }
  double tick_dt() const { return 1.0 / planner_rate; }
};

/// Gains and weights of the tracked outputs plus the planner and QP setup.
struct ControllerConfig {
  PlannerConfig planner;
  OscConfig osc;
  FsmSchedule schedule;
  PdGains com_gains{50.0, 10.0};
  PdGains swing_gains{200.0, 20.0};
  PdGains pitch_gains{100.0, 10.0};
  PdGains leg_gains{50.0, 10.0};
  double com_weight = 10.0;
  double swing_weight = 5.0;
  double pitch_weight = 2.0;
  double leg_weight = 0.5;
  double swing_apex = 0.08;
  RegularizationTargets regularization;
  std::optional<RetargetOverrides> retarget;
};

struct RolloutConfig {
  BipedParams biped;
  ControllerConfig controller;
  EpisodeConfig episode;
  /// Unset: RewardWeights::Default for the biped and schedule.
  std::optional<RewardWeights> reward;

  RewardWeights reward_weights() const;
};

enum class Outcome { kCompleted, kFell };
const char* ToString(Outcome outcome);

/// One planner tick. `x`, `fsm` and `u` are taken at t = tick * tick_dt;
/// h and r cover the tick's sim substeps.
struct TickRecord {
  int tick = 0;
  double t = 0.0;
  FullState x;
  TorqueCommand u;
  FsmState fsm;
  Task task;
  AchievedTask achieved;
  double h = 0.0;
  double r = 0.0;
  std::array<Vec2, 2> contact_force{Vec2::Zero(), Vec2::Zero()};
  PlanStatus plan_status = PlanStatus::kConverged;
};

/// A completed single-support phase, closed by the touchdown of `foot`.
struct StepRecord {
  double land_time = 0.0;
  Foot foot = Foot::kRight;
  Vec2 position = Vec2::Zero();
  /// Displacement from the previous stance foot along the ground.
  double stride = 0.0;
  /// Torso displacement along the ground divided by the phase duration.
  double speed = 0.0;
  /// Means over the phase's sim steps: base height above the ground and
  /// torso pitch.
  double mean_pelvis_height = 0.0;
  double mean_pitch = 0.0;
  /// Sum of u'u over the phase's sim steps.
  double effort = 0.0;
  int sim_steps = 0;
};

struct RolloutTrace {
  std::vector<TickRecord> ticks;
  std::vector<StepRecord> steps;
  Outcome outcome = Outcome::kCompleted;
  double fall_time = 0.0;
  std::string diagnostic;

  int size() const { return static_cast<int>(ticks.size()); }
  /// Sum of h over realized ticks.
  double total_h() const;
};

/// Runs one episode of the ROM-MPC on the biped. Deterministic in
/// (params, task, cfg).
RolloutTrace Rollout(const RomParams& params, const Task& task,
                     const RolloutConfig& cfg);

/// Sum of the realized per-tick rewards.
double EpisodeReturn(const RolloutTrace& trace);

/// Mean of the task-tracking reward term over realized ticks (0 if empty).
double MeanTaskTerm(const RolloutTrace& trace, const RolloutConfig& cfg);

/// Full horizon, no fall, and mean task term >= threshold.
bool EpisodeSucceeded(const RolloutTrace& trace, const RolloutConfig& cfg,
                      double task_threshold = 0.25);

struct TaskResult {
  Task task;
  double episode_return = 0.0;
  bool success = false;
};

struct EvalResult {
  double mean_return = 0.0;
  std::vector<TaskResult> per_task;
};

/// Mean return over tasks; task i runs with seeds[i] (cfg seed if empty).
EvalResult EvalReturn(const RomParams& params, const std::vector<Task>& tasks,
                      const RolloutConfig& cfg,
                      const std::vector<std::uint64_t>& seeds = {});

/// Nominal initial state: feet under the hip on the ground, torso level,
/// CoM at the given height, zero velocity.
FullState NominalStance(const BipedModel& model, double com_height);

}  // namespace romshaper
