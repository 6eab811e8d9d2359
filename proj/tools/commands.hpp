#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fceval::cli {

/// Process exit codes.
enum ExitCode : int {
    ok = 0,
    usage_error = 1,
    data_error = 2,
    degenerate = 3,
};

/// Runs the command line `args` (args[0] is the program name) and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fceval::cli
