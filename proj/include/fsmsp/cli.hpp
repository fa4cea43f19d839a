#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsmsp::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 2,
    kInternalError = 3,
    kBudgetExceeded = 4,
    kValidationFailure = 5,
};

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsmsp::cli
