#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace honeytrap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;  // replay found differing outputs
inline constexpr int kExitInput = 2;
inline constexpr int kExitEnvironment = 3;

/// Parses `args` (without the program name) and runs the subcommand.
/// Results go to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace honeytrap::cli
