#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steklov::cli {

inline constexpr const char* version = "1.0.0";

enum ExitCode : int {
  ok = 0,
  failure = 1,  // I/O and unexpected errors
  usage = 2,
  domain = 3,
  numerical = 4,
};

/// Runs the command line `args` (without the program name). Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steklov::cli
