#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lichen {

// Exit codes of every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;  // violations, differences, refusals
inline constexpr int kExitFatal = 2;     // usage, I/O and data errors

// Environment variable that overrides the provider cache directory.
inline constexpr const char* kCacheDirEnv = "LICHEN_CACHE_DIR";

// Runs the command line `args` (without the program name). Reports go to
// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lichen
