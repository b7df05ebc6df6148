#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace choquard::cli {

enum ExitCode : int {
    ok = 0,
    failure = 1,
    config_error = 2,
    degenerate = 3, ///< solve: no converged solution; check: hypotheses fail
    certificate_failure = 4,
    dichotomy_mismatch = 5,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name: e.g. {"solve", "--config", "run.cfg", "--out", "dir"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace choquard::cli
