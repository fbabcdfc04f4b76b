#pragma once

#include <iosfwd>

namespace ctis::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,  ///< bad flags, invalid configuration, geometry mismatch
    kData = 3,   ///< unreadable, missing or malformed files
};

/// Entry point of the `ctis` executable. Reports go to `out`, the resolved
/// configuration and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ctis::cli
