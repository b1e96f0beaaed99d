#pragma once

#include "romshaper/biped/dynamics.h"

namespace romshaper {

enum class FsmMode { kLeftSupport, kRightSupport, kDoubleSupport };

const char* ToString(FsmMode mode);

struct FsmSchedule {
  double single_support = 0.35;
  double double_support = 0.0;

  double step_period() const { return single_support + double_support; }
};

struct FsmState {
  FsmMode mode = FsmMode::kLeftSupport;
  /// time_in_mode / mode duration, in [0, 1).
  double phase = 0.0;
  double time_in_mode = 0.0;
  /// Number of completed single-support phases before this one.
  int step_index = 0;
};

/// Time-based schedule L -> (DS) -> R -> (DS) -> L ... starting at t = 0.
/// Times within 1e-9 s of a boundary are assigned to the later mode.
FsmState ComputeFsmState(double t, const FsmSchedule& schedule);

/// Stance foot of a single-support mode; left for double support.
Foot StanceFoot(const FsmState& fsm);

}  // namespace romshaper
