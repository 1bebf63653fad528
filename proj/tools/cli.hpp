#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cotype::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kResourceLimit = 2,
    kVerificationFailure = 3,
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs the command line `args` (without the program name). Primary output
/// goes to `out`; the run manifest and diagnostics go to `err` unless
/// --manifest names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cotype::cli
