#pragma once

#include "romshaper/biped/biped_model.h"

namespace romshaper {

struct SwingSample {
  Vec2 pos;
  Vec2 vel;
  Vec2 acc;
};

/// Swing foot reference at `phase` in [0, 1] of a swing lasting `duration`
/// seconds. Progress from start to target follows a quintic with zero end
/// velocity and acceleration; a vertical bump rises to `apex_height` at
/// phase 0.5 and returns to zero with zero vertical velocity at touchdown.
SwingSample SwingFootTrajectory(const Vec2& start, const Vec2& target,
                                double apex_height, double phase,
                                double duration = 1.0);

}  // namespace romshaper
