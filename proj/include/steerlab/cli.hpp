#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace steerlab {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_validation = 2,
    exit_cap = 3,
    exit_numerical = 4,
};

/// Runs one command line (without the program name). The report goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace steerlab
