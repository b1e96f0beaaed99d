#include "romshaper/eval/gait.h"

#include <algorithm>
#include <stdexcept>

namespace romshaper {
namespace {

template <typename F>
double Range(std::span<const StepRecord> steps, F get) {
  const auto [lo, hi] = std::minmax_element(
      steps.begin(), steps.end(),
      [&](const StepRecord& a, const StepRecord& b) { return get(a) < get(b); });
  return get(*hi) - get(*lo);
}

}  // namespace

double EpisodeCost(std::span<const StepRecord> window) {
  if (window.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : window) sum += s.effort;
  return sum / static_cast<double>(window.size());
}

std::optional<GaitMetrics> ExtractPeriodicGait(
    std::span<const StepRecord> steps, const PeriodicityCriteria& crit) {
  if (crit.window < 1) {
    throw std::invalid_argument("ExtractPeriodicGait: window must be >= 1");
  }
  const int n = static_cast<int>(steps.size());
  for (int start = n - crit.window; start >= 0; --start) {
    const auto w = steps.subspan(start, crit.window);
    if (Range(w, [](const StepRecord& s) { return s.stride; }) >=
        crit.stride_range) {
      continue;
    }
    if (Range(w, [](const StepRecord& s) { return s.mean_pelvis_height; }) >=
        crit.pelvis_height_range) {
      continue;
    }
    if (Range(w, [](const StepRecord& s) { return s.mean_pitch; }) >=
        crit.pitch_range) {
      continue;
    }
    GaitMetrics m;
    m.first_step = start;
    for (const auto& s : w) {
      m.mean_stride += s.stride;
      m.mean_speed += s.speed;
    }
    m.mean_stride /= crit.window;
    m.mean_speed /= crit.window;
    m.cost = EpisodeCost(w);
    return m;
  }
  return std::nullopt;
}

std::optional<GaitMetrics> ExtractPeriodicGait(const RolloutTrace& trace,
                                               const PeriodicityCriteria& crit) {
  return ExtractPeriodicGait(std::span<const StepRecord>(trace.steps), crit);
}

}  // namespace romshaper
