#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace freemoments::cli {

/// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_numeric = 2;

/// Runs one invocation; args excludes the program name. JSON (or the error
/// object) goes to `out` unless --out redirects it to a file.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace freemoments::cli
