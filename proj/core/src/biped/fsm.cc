#include "romshaper/biped/fsm.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace romshaper {

const char* ToString(FsmMode mode) {
  switch (mode) {
    case FsmMode::kLeftSupport:
      return "left";
    case FsmMode::kRightSupport:
      return "right";
    case FsmMode::kDoubleSupport:
      return "double";
  }
  return "?";
}

FsmState ComputeFsmState(double t, const FsmSchedule& schedule) {
  if (t < 0.0) throw std::invalid_argument("ComputeFsmState: t < 0");
  constexpr double kEps = 1e-9;
  const double period = schedule.step_period();
  const int index = static_cast<int>(std::floor((t + kEps) / period));
  const double local = std::max(0.0, t - index * period);

  FsmState s;
  s.step_index = index;
  if (local + kEps < schedule.single_support ||
      schedule.double_support <= 0.0) {
    s.mode = index % 2 == 0 ? FsmMode::kLeftSupport : FsmMode::kRightSupport;
    s.time_in_mode = std::min(local, schedule.single_support);
    s.phase = std::clamp(s.time_in_mode / schedule.single_support, 0.0,
                         std::nextafter(1.0, 0.0));
  } else {
    s.mode = FsmMode::kDoubleSupport;
    s.time_in_mode = std::max(0.0, local - schedule.single_support);
    s.phase = std::clamp(s.time_in_mode / schedule.double_support, 0.0,
                         std::nextafter(1.0, 0.0));
  }
  return s;
}

Foot StanceFoot(const FsmState& fsm) {
  return fsm.mode == FsmMode::kRightSupport ? Foot::kRight : Foot::kLeft;
}

}  // namespace romshaper
