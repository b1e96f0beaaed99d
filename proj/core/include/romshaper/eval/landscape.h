#pragma once

#include <optional>
#include <string>
#include <vector>

#include "romshaper/eval/gait.h"
#include "romshaper/eval/rollout.h"
#include "romshaper/eval/worker_pool.h"

namespace romshaper {

enum class RegionLabel { kBoth, kGainedByA, kLostByA, kNeither };
const char* ToString(RegionLabel label);

struct LandscapeCell {
  Task task;
  std::optional<double> cost_a;
  std::optional<double> cost_b;
  /// cost_a / cost_b, present iff both costs are.
  std::optional<double> ratio;
  RegionLabel label = RegionLabel::kNeither;
};

struct LandscapeSummary {
  int both = 0;
  int gained = 0;
  int lost = 0;
  int neither = 0;
  /// Qualifying cells of each model.
  int region_a = 0;
  int region_b = 0;
  /// Mean ratio over Both cells; empty if there are none.
  std::optional<double> mean_ratio;
  /// (region_a - region_b) / region_b; empty if region_b is 0.
  std::optional<double> region_change;
};

struct LandscapeGrid {
  std::vector<LandscapeCell> cells;

  LandscapeSummary Summary() const;
};

LandscapeCell ClassifyCell(const Task& task,
                           const std::optional<GaitMetrics>& a,
                           const std::optional<GaitMetrics>& b);

/// Periodic-gait cost of one episode; empty if the episode fell or never
/// settled into a qualifying window.
std::optional<GaitMetrics> QualifiedGait(const RolloutTrace& trace,
                                         const PeriodicityCriteria& crit);

/// Rolls out both models on every task (same seed per task) and labels each
/// cell by which model reaches a periodic gait.
LandscapeGrid CostLandscape(const RomParams& params_a,
                            const RomParams& params_b,
                            const std::vector<Task>& tasks,
                            const RolloutConfig& cfg,
                            const PeriodicityCriteria& crit = {},
                            const WorkerPool& pool = WorkerPool(1));

/// Cell centers of a stride x incline rectangle, stride-major.
std::vector<Task> TaskRange(double stride_lo, double stride_hi,
                            double stride_step, double incline_lo,
                            double incline_hi, double incline_step);

}  // namespace romshaper
