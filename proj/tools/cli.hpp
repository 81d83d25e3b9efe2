#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace simlearn::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitValidation = 4;
inline constexpr int kExitVerifyFailed = 5;

/// Runs `simlearn <subcommand> [flags]`. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace simlearn::cli
