#pragma once

#include <iosfwd>

#include "run_config.hpp"

namespace vilenkin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitUsage = 2;

/// Runs one configured command, writing artifacts under the resolved output directory.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (flags, subcommand, --config) and executes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vilenkin::cli
