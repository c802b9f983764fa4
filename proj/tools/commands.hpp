// Command-line front end: argument parsing and the subcommands that write
// figure and table data as CSV or JSON.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace s2re::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailed = 2;

/// Runs the tool on `args` (without the program name). Data goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// printf("%.17g")
std::string format_number(double x);

}  // namespace s2re::cli
