#pragma once

#include <iosfwd>

namespace sqd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Subcommands: run, analyze, compare, gen-decks, validate. Usage errors and
/// invalid configurations return kExitUsage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sqd::cli
