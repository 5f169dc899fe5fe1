#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

#include "spinchain/app/config.hpp"

namespace spinchain::app {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct CommandOptions {
  std::optional<std::uint64_t> seed;          ///< overrides optimizer.seed
  std::optional<std::filesystem::path> out;   ///< overrides output.directory
  std::size_t restarts = 1;
};

/// Propagates the configured control and writes trajectory.csv and infidelity.csv.
int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& report);
/// Runs the configured optimizer; writes history, best_control.json and the final trajectory.
int cmd_optimize(const RunConfig& config, const CommandOptions& options, std::ostream& report);

/// Loads the config and runs the command, mapping failures to exit codes. Diagnostics go to
/// the log.
int run_simulate(const std::filesystem::path& config, const CommandOptions& options, std::ostream& report);
int run_optimize(const std::filesystem::path& config, const CommandOptions& options, std::ostream& report);

}  // namespace spinchain::app
