#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace memguard::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitRefused = 4;

/// Runs one command line (args[0] is the program name) and returns the exit
/// status. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memguard::cli
