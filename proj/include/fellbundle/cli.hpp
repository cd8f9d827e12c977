#pragma once

#include <ostream>

namespace fell::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

/// Runs one command. argv[0] is the program name, argv[1] the command.
/// Reports go to `out` as key-sorted JSON, diagnostics to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fell::cli
