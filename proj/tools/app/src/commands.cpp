#include "spinchain/app/commands.hpp"

#include <cmath>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "spinchain/adjoint.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/io.hpp"

namespace spinchain::app {

namespace fs = std::filesystem;

namespace {

fs::path output_dir(const RunConfig& config, const CommandOptions& options) {
  fs::path dir = options.out.value_or(config.output.directory);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  spdlog::debug("writing {}", path.string());
  return out;
}

ShiftFunction shift_for(const RunConfig& config) {
  if (config.shift == ShiftKind::Midpoint) return ShiftFunction::midpoint(config.model.shift_rate(), config.grid);
  return ShiftFunction::linear(config.model);
}

void write_json(const fs::path& path, const nlohmann::json& value) {
  auto out = open_output(path);
  out << value.dump(2) << '\n';
}

void write_state_files(const RunConfig& config, const fs::path& dir, const Trajectory& traj) {
  if (config.output.trajectory) {
    auto out = open_output(dir / "trajectory.csv");
    write_trajectory_csv(out, traj, config.problem.psig);
  }
  if (config.output.infidelity) {
    auto out = open_output(dir / "infidelity.csv");
    write_infidelity_csv(out, traj, config.problem.psig);
  }
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw SolverError(std::string(what) + " is not finite");
}

int optimize_gpm(const RunConfig& config, const GpmConfig& gpm, const CommandOptions& options,
                 std::ostream& report) {
  if (options.restarts > 1) throw ConfigError("--restarts applies to the GA optimizer only");
  PLinearControl u0 = PLinearControl::zeros(config.grid);
  if (const auto* pl = std::get_if<PLinearControl>(&config.control)) u0 = *pl;
  else if (!std::holds_alternative<ZeroControl>(config.control))
    throw ConfigError("control.class: the GPM optimizer needs a zero or plinear initial control");
  if (!u0.feasible(config.box)) throw ConfigError("control: initial control violates the bounds");

  const OptimizerRun run = run_gpm(config.model, config.problem, config.box, u0, gpm);
  const double final_objective = run.objective_history.back();
  require_finite(final_objective, "final objective");
  if (run.reason == GpmStop::MaxIterations || run.reason == GpmStop::LineSearchFailed)
    spdlog::warn("GPM stopped before reaching a tolerance ({})", to_string(run.reason));

  const fs::path dir = output_dir(config, options);
  {
    auto out = open_output(dir / "history.csv");
    write_history_csv(out, run);
  }
  {
    auto out = open_output(dir / "gradient.csv");
    write_gradient_csv(out, run.final_gradient);
  }
  write_json(dir / "best_control.json", control_to_json(run.best(), config.box, config.grid.intervals()));
  const Trajectory traj = propagate_continuous(config.model, run.best(), ShiftFunction::linear(config.model),
                                               config.problem.psi0, config.grid, gpm.ode_tol);
  write_state_files(config, dir, traj);

  report << "stop_reason " << to_string(run.reason) << '\n'
         << "iterations " << run.objective_history.size() - 1 << '\n'
         << "final_objective " << format_real(final_objective) << '\n'
         << "terminal_infidelity " << format_real(infidelity(traj.final_state(), config.problem.psig)) << '\n'
         << "forward_solves " << run.forward_solve_count << '\n';
  return kExitOk;
}

struct GaOutcome {
  SearchResult search;
  ControlSignal control;
  PConstControl discretized;
};

GaOutcome run_ga_once(const RunConfig& config, const GaSettings& ga, std::uint64_t seed) {
  GaConfig cfg = ga.config;
  cfg.seed = seed;
  if (ga.target == GaTarget::SpecialClass) {
    const auto bounds = default_special_class_bounds(config.box);
    auto r = optimize_special_class(config.model, config.problem, config.grid, config.box, bounds, cfg);
    return {std::move(r.search), std::move(r.control), std::move(r.discretized)};
  }
  const auto bounds = default_sine_basis_bounds(config.box, ga.terms, ga.max_frequency);
  auto r = optimize_sine_basis(config.model, config.problem, config.grid, config.box, bounds, cfg);
  return {std::move(r.search), std::move(r.control), std::move(r.discretized)};
}

int optimize_ga(const RunConfig& config, const GaSettings& ga, const CommandOptions& options,
                std::ostream& report) {
  if (config.shelf != ShelfRule::Midpoint)
    spdlog::info("GA objectives use the midpoint shelf rule");
  const std::uint64_t base_seed = options.seed.value_or(ga.config.seed);
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);

  std::vector<std::optional<GaOutcome>> outcomes(restarts);
  std::vector<std::exception_ptr> errors(restarts);
  {
    std::vector<std::jthread> workers;
    for (std::size_t r = 0; r < restarts; ++r) {
      workers.emplace_back([&, r] {
        try {
          outcomes[r] = run_ga_once(config, ga, base_seed + r);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::size_t best = 0;
  std::size_t total_evals = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    total_evals += outcomes[r]->search.eval_count;
    if (outcomes[r]->search.best_value < outcomes[best]->search.best_value) best = r;
  }
  const GaOutcome& winner = *outcomes[best];
  require_finite(winner.search.best_value, "best GA objective");

  const fs::path dir = output_dir(config, options);
  {
    auto out = open_output(dir / "history.jsonl");
    write_generation_jsonl(out, winner.search.history);
  }
  if (restarts > 1) {
    auto out = open_output(dir / "restarts.csv");
    out << "restart,seed,best,evals\n";
    for (std::size_t r = 0; r < restarts; ++r)
      out << r << ',' << base_seed + r << ',' << format_real(outcomes[r]->search.best_value) << ','
          << outcomes[r]->search.eval_count << '\n';
  }
  write_json(dir / "best_control.json", control_to_json(winner.control, config.box, config.grid.intervals()));
  const Trajectory traj = propagate_pconst(config.model, winner.discretized, config.problem.psi0);
  write_state_files(config, dir, traj);

  report << "best_seed " << base_seed + best << '\n'
         << "final_objective " << format_real(winner.search.best_value) << '\n'
         << "terminal_infidelity " << format_real(infidelity(traj.final_state(), config.problem.psig)) << '\n'
         << "forward_solves " << total_evals << '\n';
  return kExitOk;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kExitConfig;
  } catch (const SolverError& e) {
    spdlog::error("solver failure: {}", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    spdlog::error("run failed: {}", e.what());
    return kExitSolver;
  }
}

}  // namespace

int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& report) {
  Trajectory traj;
  ControlSignal used = config.control;
  if (config.solver.method == SolverMethod::Expm) {
    // The exact exponential product needs a piecewise-constant control.
    PConstControl pc = std::holds_alternative<PConstControl>(config.control)
                           ? std::get<PConstControl>(config.control)
                           : discretize_pconst(config.control, config.grid, config.box, config.shelf);
    if (config.shift == ShiftKind::Linear)
      spdlog::info("expm propagation uses the interval-midpoint shift");
    traj = propagate_pconst(config.model, pc, config.problem.psi0);
    used = std::move(pc);
  } else {
    const TimeGrid out = TimeGrid::uniform(config.model.horizon(), config.solver.output_intervals);
    traj = propagate_continuous(config.model, config.control, shift_for(config), config.problem.psi0, out,
                                config.solver.tolerance);
  }
  const double terminal = infidelity(traj.final_state(), config.problem.psig);
  const double objective = objective_Phi(traj, used, config.problem);
  require_finite(objective, "objective");

  write_state_files(config, output_dir(config, options), traj);
  report << "terminal_infidelity " << format_real(terminal) << '\n'
         << "objective " << format_real(objective) << '\n';
  return kExitOk;
}

int cmd_optimize(const RunConfig& config, const CommandOptions& options, std::ostream& report) {
  if (!config.optimizer) throw ConfigError("optimizer: section missing");
  if (const auto* gpm = std::get_if<GpmConfig>(&*config.optimizer)) return optimize_gpm(config, *gpm, options, report);
  return optimize_ga(config, std::get<GaSettings>(*config.optimizer), options, report);
}

int run_simulate(const fs::path& config, const CommandOptions& options, std::ostream& report) {
  return guarded([&] { return cmd_simulate(load_config(config), options, report); });
}

int run_optimize(const fs::path& config, const CommandOptions& options, std::ostream& report) {
  return guarded([&] { return cmd_optimize(load_config(config), options, report); });
}

}  // namespace spinchain::app
