#pragma once

#include <optional>

namespace romshaper {

struct Task;

/// Replacement values for regularization targets. Learned ROM parameters
/// are not affected.
struct RetargetOverrides {
  std::optional<double> torso_pitch;
  std::optional<double> stance_leg_length;
  std::optional<double> swing_leg_length;
};

struct RegularizationTargets {
  double torso_pitch = 0.0;
  double stance_leg_length = 0.89;
  double swing_leg_length = 0.85;
};

/// Defaults (level torso) with any override applied.
RegularizationTargets ComputeRegularizationTargets(
    const Task& task, const std::optional<RetargetOverrides>& retarget,
    const RegularizationTargets& defaults = {});

}  // namespace romshaper
