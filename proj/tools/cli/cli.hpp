#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corrtrans::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailed = 1;
inline constexpr int kUsageError = 2;

/// Runs one command line (without the program name). Result tables go to the
/// --out file or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace corrtrans::cli
