#include "romshaper/control/regularization.h"

#include "romshaper/learn/task_grid.h"

namespace romshaper {

RegularizationTargets ComputeRegularizationTargets(
    const Task& /*task*/, const std::optional<RetargetOverrides>& retarget,
    const RegularizationTargets& defaults) {
  RegularizationTargets out = defaults;
  if (!retarget) return out;
  if (retarget->torso_pitch) out.torso_pitch = *retarget->torso_pitch;
  if (retarget->stance_leg_length) {
    out.stance_leg_length = *retarget->stance_leg_length;
  }
  if (retarget->swing_leg_length) {
    out.swing_leg_length = *retarget->swing_leg_length;
  }
  return out;
}

}  // namespace romshaper
