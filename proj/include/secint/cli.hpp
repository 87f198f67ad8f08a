#pragma once

// Batch front end. Exit codes: 0 success, 1 invalid input (unreadable or
// malformed files, validation failure, failed move precondition), 2 failed
// assertion (move invariance, parallel-copy identity), 64 usage error.

#include <string>
#include <vector>

namespace secint {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitAssertion = 2;
inline constexpr int kExitUsage = 64;

struct CliResult {
    int exit_code = kExitOk;
    std::string out;
    std::string err;
};

/// Arguments without the program name.
CliResult run_cli(const std::vector<std::string>& args);

} // namespace secint
