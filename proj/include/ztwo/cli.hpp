#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ztwo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidInput = 2;

/// Runs the command line `args` (program name excluded), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ztwo
