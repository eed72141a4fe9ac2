#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace projmc {

/// Exit codes of the projmc command.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitTimeout = 2,
  kExitBackend = 3,
  kExitBelowThreshold = 4,
};

/// Environment variable naming the default external solver binary.
inline constexpr const char* kSolverEnvVar = "PROJMC_SOLVER";

/// Runs `projmc <args...>` (args excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace projmc
