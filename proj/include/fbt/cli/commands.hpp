#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fbt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command line (args excludes the program name). JSON results go to
// `out`, diagnostics and usage text to `err`.
int execute(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace fbt::cli
