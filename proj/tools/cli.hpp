#pragma once

#include <ostream>

namespace pinwheel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadArguments = 2;
inline constexpr int kExitInternal = 3;

/// Runs one subcommand. Data goes to `out` (or --output), the one-line
/// summary and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pinwheel::cli
