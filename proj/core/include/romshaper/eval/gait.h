#pragma once

#include <optional>
#include <span>

#include "romshaper/eval/rollout.h"

namespace romshaper {

/// Windowed variation limits for accepting a stretch of steps as a steady
/// gait. All comparisons are strict.
struct PeriodicityCriteria {
  double stride_range = 0.02;
  double pelvis_height_range = 0.03;
  double pitch_range = 0.1;
  int window = 4;
};

struct GaitMetrics {
  /// Index of the window's first step in the trace.
  int first_step = 0;
  double mean_stride = 0.0;
  double mean_speed = 0.0;
  /// EpisodeCost of the window.
  double cost = 0.0;
};

/// Sum of u'u over the window's sim steps divided by the number of steps.
double EpisodeCost(std::span<const StepRecord> window);

/// Last window of consecutive steps meeting every criterion, if any.
std::optional<GaitMetrics> ExtractPeriodicGait(
    std::span<const StepRecord> steps, const PeriodicityCriteria& crit = {});
std::optional<GaitMetrics> ExtractPeriodicGait(
    const RolloutTrace& trace, const PeriodicityCriteria& crit = {});

}  // namespace romshaper
