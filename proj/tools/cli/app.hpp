#pragma once

#include <iosfwd>

namespace lrsplit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitNotConverged = 3,
};

/// Entry point of the `lrsplit` tool, callable in-process. Normal output
/// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrsplit::cli
