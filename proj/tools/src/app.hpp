#pragma once

#include <cstdint>
#include <string>

namespace cvqkd::cli {

/// Exit codes: 0 success, 1 computation or check failure, 2 usage error.
int run(int argc, char** argv);

struct SelfcheckOptions {
    bool fast = false;
    double tolerance = 1e-4;
    std::uint64_t seed = 20180433;
};

/// Runs the oracle-agreement suite and prints one line per check.
/// Returns 0 iff all checks pass.
int run_selfcheck(const SelfcheckOptions& options);

} // namespace cvqkd::cli
