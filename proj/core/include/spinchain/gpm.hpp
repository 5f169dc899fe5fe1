#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "spinchain/adjoint.hpp"
#include "spinchain/controls.hpp"
#include "spinchain/model.hpp"
#include "spinchain/objectives.hpp"

namespace spinchain {

enum class GpmVariant { OneStep, TwoStep, ThreeStep };

struct GpmConfig {
  GpmVariant variant = GpmVariant::OneStep;
  double alpha0 = 1.0;     ///< trial step at every iteration
  double backtrack = 0.5;  ///< step shrink factor
  double beta = 0.0;       ///< two-step momentum
  double gamma = 0.0;      ///< three-step momentum
  std::size_t max_iters = 100;
  double tol_obj = 1e-12;  ///< stop when the accepted decrease falls below this
  double tol_res = 1e-8;   ///< stop when the projected-gradient residual falls below this
  std::size_t max_halvings = 30;
  double ode_tol = 1e-10;

  void validate() const;
};

enum class GpmStop { ResidualTolerance, ObjectiveTolerance, MaxIterations, LineSearchFailed };
std::string_view to_string(GpmStop stop) noexcept;

struct OptimizerRun {
  std::vector<PLinearControl> iterates;
  std::vector<double> objective_history;
  std::vector<double> residual_history;
  std::vector<double> alpha_history;  ///< step used to reach iterate k (alpha0 for k = 0)
  std::size_t forward_solve_count = 0;
  std::vector<std::size_t> forward_solves;  ///< cumulative count after each iterate
  GpmStop reason = GpmStop::MaxIterations;
  GradientSignal final_gradient;
  double final_alpha = 0.0;

  const PLinearControl& best() const { return iterates.back(); }
};

/// One projected step at every node and channel:
/// Pr_[-b,b](u_k - alpha g + beta (u_k - u_{k-1}) + gamma (u_{k-1} - u_{k-2})).
/// The one-step variant ignores the histories; two-step needs u_{k-1}; three-step needs both.
PLinearControl gpm_step(const PLinearControl& u_k, const PLinearControl* u_km1,
                        const PLinearControl* u_km2, const GradientSignal& grad,
                        GpmVariant variant, double alpha, double beta, double gamma,
                        const ControlBox& box);

/// Projected-gradient iterations with backtracking on the step. The gradient grid is the
/// control grid; the shift is linear.
OptimizerRun run_gpm(const ChainModel& model, const ProblemSpec& spec, const ControlBox& box,
                     const PLinearControl& u0, const GpmConfig& config);

}  // namespace spinchain
