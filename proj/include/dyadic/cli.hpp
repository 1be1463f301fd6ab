#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dyadic {

// Exit codes. When several files disagree the strongest wins: io, then
// input, then conflicts.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitConflicts = 3;

/// Environment variable naming the profile used when --profile is absent.
inline constexpr const char* kProfileEnv = "DYADIC_PROFILE";

/// `args` excludes the program name. Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dyadic
