#include <cstdlib>
#include <iostream>

#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "spinchain/app/commands.hpp"
#include "spinchain/app/verify.hpp"

int main(int argc, char** argv) {
  // Logs go to stderr so that stdout carries only the result report.
  spdlog::set_default_logger(spdlog::stderr_color_mt("spinchain"));
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("SPINCHAIN_LOG")) spdlog::cfg::helpers::load_levels(level);

  CLI::App app{"Spin-chain optimal control: simulate, optimize and verify"};
  app.require_subcommand(1);

  std::string config;
  spinchain::app::CommandOptions options;
  std::uint64_t seed = 0;
  std::string out;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out, "Output directory (overrides output.directory)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Propagate the configured control");
  add_run_flags(simulate);

  CLI::App* optimize = app.add_subcommand("optimize", "Run the configured optimizer");
  add_run_flags(optimize);
  optimize->add_option("--seed", seed, "Random seed (overrides optimizer.seed)");
  optimize->add_option("--restarts", options.restarts, "Independent GA restarts run concurrently")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));

  CLI::App* verify = app.add_subcommand("verify", "Run the built-in oracle checks");
  bool corrupt = false;
  verify->add_flag("--corrupt-h0", corrupt, "Flip the sign of H0(0,0) before checking (self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : spinchain::app::kExitConfig;
  }

  if (optimize->count("--seed")) options.seed = seed;
  if (!out.empty()) options.out = out;

  if (*simulate) return spinchain::app::run_simulate(config, options, std::cout);
  if (*optimize) return spinchain::app::run_optimize(config, options, std::cout);
  return spinchain::app::cmd_verify(std::cout, corrupt);
}
