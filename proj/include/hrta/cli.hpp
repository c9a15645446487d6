#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hrta::cli {

enum ExitCode : int {
    kOk = 0,
    kNegative = 1,    // unschedulable, infeasible, or failed checks
    kInputError = 2,  // bad input, precondition mismatch, cross-validation mismatch
};

/// Runs the command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hrta::cli
