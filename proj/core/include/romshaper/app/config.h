#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "romshaper/eval/gait.h"
#include "romshaper/eval/rollout.h"
#include "romshaper/eval/training.h"

namespace romshaper {

/// Everything a run needs: robot, controller, episode, reward, gait
/// criteria and training setup.
struct RunConfig {
  RolloutConfig rollout;
  TrainConfig train;
  PeriodicityCriteria periodicity;
  std::string output_dir = "runs/default";
};

/// Invalid configuration. `line` is 1-based, or 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses YAML text. Missing keys keep their defaults; unknown keys and
/// out-of-range values are rejected with the offending line.
RunConfig ParseConfig(const std::string& text);
RunConfig LoadConfig(const std::string& path);

/// Canonical YAML with every key present.
std::string EmitConfig(const RunConfig& config);
void SaveConfig(const RunConfig& config, const std::string& path);

/// FNV-1a of the canonical form, excluding the iteration budget, worker
/// count and output directory (they do not change a training trajectory).
std::uint64_t ConfigHash(const RunConfig& config);

}  // namespace romshaper
