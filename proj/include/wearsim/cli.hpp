#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wearsim::cli {

enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kUsage = 2,
  kTraceInvalid = 3,
  kSimulationError = 4,
};

/// Entry point for the `wearsim` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wearsim::cli
