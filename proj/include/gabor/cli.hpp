#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gabor {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 3 negative verdict (not a frame, check failed), 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 3;

/// Runs the command line; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gabor
