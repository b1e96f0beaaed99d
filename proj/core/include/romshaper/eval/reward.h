#pragma once

#include <Eigen/Dense>

#include "romshaper/biped/biped_model.h"
#include "romshaper/learn/task_grid.h"

namespace romshaper {

/// Task actually realized by the robot: last step length along the ground
/// and mean walking speed along the ground.
struct AchievedTask {
  double stride = 0.0;
  double speed = 0.0;
};

/// The feedback a perfect tracker of `task` would report.
AchievedTask CommandedFeedback(const Task& task, double single_support);

struct RewardWeights {
  /// Exponent weight on the step cost h.
  double w = 1.0;
  /// Diagonal of W over (stride error, speed error).
  Eigen::Vector2d W = Eigen::Vector2d(25.0, 25.0 * 0.35 * 0.35);

  /// w normalized so that holding the body weight on one leg for one
  /// planner tick gives w h = 1; W puts a speed error of stride/T on par
  /// with a stride error.
  static RewardWeights Default(const BipedParams& biped, double tick_dt,
                               double single_support);
};

/// exp(-w h) + 0.5 exp(-|e|_W) with e = (stride, speed) error and
/// |e|_W = sqrt(e' W e).
double Reward(double h, const Task& task, const AchievedTask& achieved,
              const RewardWeights& weights, double single_support);

/// The second (task tracking) term of Reward alone.
double TaskTerm(const Task& task, const AchievedTask& achieved,
                const RewardWeights& weights, double single_support);

}  // namespace romshaper
