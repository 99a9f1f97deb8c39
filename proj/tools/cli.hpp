#pragma once

#include <iosfwd>

namespace bcm::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kSuccess = 0, kUsage = 1, kInadmissible = 2 };

/// Parse arguments, dispatch the subcommand and write its artifacts.
/// Human-readable summaries go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bcm::cli
