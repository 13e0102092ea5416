#pragma once

#include <array>
#include <ostream>
#include <string_view>

#include "fiberpol/cli/config.hpp"

namespace fiberpol::cli {

inline constexpr std::array<std::string_view, 6> kSubcommands{"map", "sweep", "phase", "crossing", "nlse", "ed"};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitConvergence = 3;

/// Runs one subcommand and writes its files. Errors are reported on diag as
/// a single JSON line and mapped to kExitDomain or kExitConvergence.
int dispatch(std::string_view subcommand, const RunConfig& cfg, std::ostream& diag);

/// Command-line entry point (argument parsing, config loading, dispatch).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& diag);

}  // namespace fiberpol::cli
