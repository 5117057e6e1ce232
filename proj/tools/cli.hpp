#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cajux::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kParseError = 2;
inline constexpr int kBudget = 3;
inline constexpr int kMissingInput = 4;

/// Runs one command line (args[0] is the program name). Results go to `out`,
/// diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cajux::cli
