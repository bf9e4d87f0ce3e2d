#pragma once

#include <ostream>

namespace gazeform::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInternalError = 1,
    kInputError = 2,
    kDegenerate = 3,
    kStageFailure = 4,
};

// Parses argv (argv[0] is the program name) and runs one subcommand.
// Reports go to files; the human-readable summary goes to `out`, errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gazeform::cli
