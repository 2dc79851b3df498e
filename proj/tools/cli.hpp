#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epr::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kComputeError = 3;

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless the configuration names an output file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epr::cli
