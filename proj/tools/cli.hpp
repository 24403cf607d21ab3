#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace degheat::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalid = 2,
    kSolverFailure = 3,
    kNotConverged = 4,
};

/// Runs one subcommand (`direct`, `inverse`, `manufacture`, `validate`).
/// args excludes the program name. Diagnostics go to `err` as one JSON object
/// per line; `out` receives help text and the validate report when no
/// output directory is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace degheat::cli
