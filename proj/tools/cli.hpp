#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace genus::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailed = 2;

/// Runs the `genus` command line with `args` (without the program name).
/// Reports go to --out when given, otherwise to `out`; diagnostics and
/// generated seeds go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace genus::cli
