#pragma once

#include <ostream>
#include <string>

#include "romshaper/app/config.h"
#include "romshaper/rom/rom.h"

namespace romshaper {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitStateMismatch = 3,
  kExitNumerical = 4,
};

/// Resolves a parameter source: "lip", "ckpt:<path>" (search mean),
/// "best:<path>" (best sample) or a bare checkpoint path.
RomParams ResolveParams(const std::string& source, const RunConfig& config);

/// Worker count from the flag (if > 0), then ROMSHAPER_WORKERS, then the
/// config (0 = hardware concurrency).
int ResolveWorkers(int flag, const RunConfig& config);

/// Entry point of the romshaper tool: subcommands train, rollout,
/// landscape and retarget. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace romshaper
