#pragma once

#include <iosfwd>

namespace hslo::cli {

/// Parses the command line and runs one subcommand. Returns the exit code
/// (0 success, 2 usage or configuration, 3 runtime or solver failure).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hslo::cli
