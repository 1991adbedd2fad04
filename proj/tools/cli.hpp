#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sgrf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

/// Runs the command line `args` (without the program name). Errors are
/// reported on `err` as a single line "error: <code>: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgrf::cli
