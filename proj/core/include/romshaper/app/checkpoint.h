#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "romshaper/eval/training.h"
#include "romshaper/rom/rom.h"

namespace romshaper {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  TrainingState state;
  std::uint64_t config_hash = 0;

  /// Current search mean as ROM parameters.
  RomParams MeanParams() const;
  /// Best sampled parameters so far.
  RomParams BestParams() const;
};

/// JSON document; parsing and re-serializing reproduces the bytes exactly.
std::string SerializeCheckpoint(const Checkpoint& ckpt);
Checkpoint ParseCheckpoint(const std::string& text);

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);

/// iter_0001.ckpt style name for a completed-iteration count.
std::string CheckpointFileName(int iteration);

}  // namespace romshaper
