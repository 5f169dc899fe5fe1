#include "spinchain/gpm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace spinchain {

void GpmConfig::validate() const {
  if (!(alpha0 > 0.0)) throw std::invalid_argument("GpmConfig: alpha0 must be > 0");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("GpmConfig: backtrack must lie in (0, 1)");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("GpmConfig: beta must lie in [0, 1)");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("GpmConfig: gamma must lie in [0, 1)");
  if (!(tol_obj >= 0.0) || !(tol_res >= 0.0)) throw std::invalid_argument("GpmConfig: tolerances must be >= 0");
  if (!(ode_tol > 0.0)) throw std::invalid_argument("GpmConfig: ode_tol must be > 0");
}

std::string_view to_string(GpmStop stop) noexcept {
  switch (stop) {
    case GpmStop::ResidualTolerance: return "residual-tolerance";
    case GpmStop::ObjectiveTolerance: return "objective-tolerance";
    case GpmStop::MaxIterations: return "max-iterations";
    case GpmStop::LineSearchFailed: return "line-search-failed";
  }
  return "unknown";
}

PLinearControl gpm_step(const PLinearControl& u_k, const PLinearControl* u_km1,
                        const PLinearControl* u_km2, const GradientSignal& grad,
                        GpmVariant variant, double alpha, double beta, double gamma,
                        const ControlBox& box) {
  const TimeGrid& grid = u_k.grid();
  if (grad.values.size() != grid.size())
    throw std::invalid_argument("gpm_step: gradient must be given at the control nodes");
  const bool two = variant != GpmVariant::OneStep;
  const bool three = variant == GpmVariant::ThreeStep;
  if (two && !u_km1) throw std::invalid_argument("gpm_step: two-step form needs u^(k-1)");
  if (three && !u_km2) throw std::invalid_argument("gpm_step: three-step form needs u^(k-2)");
  if ((u_km1 && u_km1->grid().size() != grid.size()) || (u_km2 && u_km2->grid().size() != grid.size()))
    throw std::invalid_argument("gpm_step: history grids differ");

  std::vector<double> out[2];
  for (std::size_t l = 0; l < 2; ++l) {
    const auto cur = u_k.nodes(l);
    out[l].resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      double v = cur[k] - alpha * grad.values[k][l];
      if (two) v += beta * (cur[k] - u_km1->nodes(l)[k]);
      if (three) v += gamma * (u_km1->nodes(l)[k] - u_km2->nodes(l)[k]);
      const double b = box.channels[l].value(grid[k]);
      out[l][k] = std::clamp(v, -b, b);
    }
  }
  return PLinearControl(grid, std::move(out[0]), std::move(out[1]));
}

namespace {

struct Evaluated {
  Trajectory psi;
  double objective;
};

}  // namespace

OptimizerRun run_gpm(const ChainModel& model, const ProblemSpec& spec, const ControlBox& box,
                     const PLinearControl& u0, const GpmConfig& config) {
  config.validate();
  spec.validate(model.sites());
  if (!u0.feasible(box)) throw std::invalid_argument("run_gpm: initial control violates the box");
  const TimeGrid& grid = u0.grid();
  const ShiftFunction sigma = ShiftFunction::linear(model);

  OptimizerRun run;
  auto forward = [&](const PLinearControl& u) {
    const ControlSignal signal = u;
    Evaluated e;
    e.psi = propagate_continuous(model, signal, sigma, spec.psi0, grid, config.ode_tol);
    e.objective = objective_Phi(e.psi, signal, spec);
    ++run.forward_solve_count;
    if (!std::isfinite(e.objective)) throw SolverError("run_gpm: non-finite objective");
    return e;
  };

  Evaluated current = forward(u0);
  run.iterates.push_back(u0);
  run.objective_history.push_back(current.objective);
  run.alpha_history.push_back(config.alpha0);
  run.forward_solves.push_back(run.forward_solve_count);

  double alpha_ref = config.alpha0;
  double last_decrease = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0;; ++k) {
    const PLinearControl& u = run.iterates.back();
    const ControlSignal signal = u;
    const AdjointTrajectory eta = solve_adjoint(model, signal, sigma, current.psi, spec, config.ode_tol);
    GradientSignal grad = gradient(model, signal, sigma, current.psi, eta, spec);
    const double residual = pmp_residual(signal, grad, alpha_ref, box, spec.quadrature);
    run.residual_history.push_back(residual);
    run.final_gradient = std::move(grad);
    run.final_alpha = alpha_ref;

    if (residual < config.tol_res) { run.reason = GpmStop::ResidualTolerance; break; }
    if (k > 0 && last_decrease < config.tol_obj) { run.reason = GpmStop::ObjectiveTolerance; break; }
    if (k >= config.max_iters) { run.reason = GpmStop::MaxIterations; break; }

    // The momentum forms bootstrap: u^(1) from the one-step form, u^(2) from the two-step form.
    GpmVariant variant = config.variant;
    if (variant == GpmVariant::ThreeStep && k < 2) variant = k == 0 ? GpmVariant::OneStep : GpmVariant::TwoStep;
    if (variant == GpmVariant::TwoStep && k < 1) variant = GpmVariant::OneStep;
    const std::size_t n_it = run.iterates.size();
    const PLinearControl* km1 = n_it >= 2 ? &run.iterates[n_it - 2] : nullptr;
    const PLinearControl* km2 = n_it >= 3 ? &run.iterates[n_it - 3] : nullptr;

    auto line_search = [&](GpmVariant form) -> std::optional<std::pair<PLinearControl, Evaluated>> {
      double alpha = config.alpha0;
      for (std::size_t h = 0; h <= config.max_halvings; ++h, alpha *= config.backtrack) {
        PLinearControl candidate =
            gpm_step(u, km1, km2, run.final_gradient, form, alpha, config.beta, config.gamma, box);
        Evaluated e = forward(candidate);
        if (e.objective < current.objective) {
          alpha_ref = alpha;
          return std::make_pair(std::move(candidate), std::move(e));
        }
      }
      return std::nullopt;
    };

    auto accepted = line_search(variant);
    // A momentum term can point uphill for every alpha; retry without it before giving up.
    if (!accepted && variant != GpmVariant::OneStep) accepted = line_search(GpmVariant::OneStep);
    if (!accepted) { run.reason = GpmStop::LineSearchFailed; break; }

    last_decrease = current.objective - accepted->second.objective;
    current = std::move(accepted->second);
    run.iterates.push_back(std::move(accepted->first));
    run.objective_history.push_back(current.objective);
    run.alpha_history.push_back(alpha_ref);
    run.forward_solves.push_back(run.forward_solve_count);
  }
  return run;
}

}  // namespace spinchain
