#include "romshaper/eval/landscape.h"

#include <cmath>
#include <stdexcept>

namespace romshaper {

const char* ToString(RegionLabel label) {
  switch (label) {
    case RegionLabel::kBoth:
      return "Both";
    case RegionLabel::kGainedByA:
      return "GainedByA";
    case RegionLabel::kLostByA:
      return "LostByA";
    case RegionLabel::kNeither:
      return "Neither";
  }
  return "?";
}

LandscapeSummary LandscapeGrid::Summary() const {
  LandscapeSummary s;
  double ratio_sum = 0.0;
  for (const auto& c : cells) {
    switch (c.label) {
      case RegionLabel::kBoth:
        ++s.both;
        ratio_sum += *c.ratio;
        break;
      case RegionLabel::kGainedByA:
        ++s.gained;
        break;
      case RegionLabel::kLostByA:
        ++s.lost;
        break;
      case RegionLabel::kNeither:
        ++s.neither;
        break;
    }
  }
  s.region_a = s.both + s.gained;
  s.region_b = s.both + s.lost;
  if (s.both > 0) s.mean_ratio = ratio_sum / s.both;
  if (s.region_b > 0) {
    s.region_change =
        static_cast<double>(s.region_a - s.region_b) / s.region_b;
  }
  return s;
}

LandscapeCell ClassifyCell(const Task& task,
                           const std::optional<GaitMetrics>& a,
                           const std::optional<GaitMetrics>& b) {
  LandscapeCell c;
  c.task = task;
  if (a) c.cost_a = a->cost;
  if (b) c.cost_b = b->cost;
  if (a && b) {
    c.label = RegionLabel::kBoth;
    c.ratio = a->cost / b->cost;
  } else if (a) {
    c.label = RegionLabel::kGainedByA;
  } else if (b) {
    c.label = RegionLabel::kLostByA;
  }
  return c;
}

std::optional<GaitMetrics> QualifiedGait(const RolloutTrace& trace,
                                         const PeriodicityCriteria& crit) {
  if (trace.outcome != Outcome::kCompleted) return std::nullopt;
  return ExtractPeriodicGait(trace, crit);
}

LandscapeGrid CostLandscape(const RomParams& params_a,
                            const RomParams& params_b,
                            const std::vector<Task>& tasks,
                            const RolloutConfig& cfg,
                            const PeriodicityCriteria& crit,
                            const WorkerPool& pool) {
  if (tasks.empty()) throw std::invalid_argument("CostLandscape: empty grid");
  const int n = static_cast<int>(tasks.size());
  std::vector<std::optional<GaitMetrics>> gaits(2 * n);
  pool.ParallelFor(2 * n, [&](int i) {
    const RomParams& p = i < n ? params_a : params_b;
    gaits[i] = QualifiedGait(Rollout(p, tasks[i % n], cfg), crit);
  });
  LandscapeGrid grid;
  for (int i = 0; i < n; ++i) {
    grid.cells.push_back(ClassifyCell(tasks[i], gaits[i], gaits[n + i]));
  }
  return grid;
}

std::vector<Task> TaskRange(double stride_lo, double stride_hi,
                            double stride_step, double incline_lo,
                            double incline_hi, double incline_step) {
  if (!(stride_step > 0.0) || !(incline_step > 0.0)) {
    throw std::invalid_argument("TaskRange: steps must be positive");
  }
  const int ns =
      static_cast<int>(std::floor((stride_hi - stride_lo) / stride_step + 1e-9)) + 1;
  const int ni = static_cast<int>(
                     std::floor((incline_hi - incline_lo) / incline_step + 1e-9)) + 1;
  // Snap to multiples of the step so that zero comes out exactly.
  auto snap = [](double v, double step) {
    const double k = std::round(v / step);
    return std::abs(v / step - k) < 1e-9 ? k * step : v;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < ni; ++j) {
      tasks.push_back({snap(stride_lo + i * stride_step, stride_step),
                       snap(incline_lo + j * incline_step, incline_step)});
    }
  }
  return tasks;
}

}  // namespace romshaper
