#include "spinchain/app/verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "spinchain/adjoint.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/app/config.hpp"
#include "spinchain/objectives.hpp"

namespace spinchain::app {

namespace {

using std::numbers::pi;

double transfer_curve(double t) { return (6 * std::cos(t) + 3 * std::cos(2 * t) - 2 * std::cos(3 * t) + 11) / 18; }
double keeping_curve(double t) {
  const double s = std::sin(t / 2);
  return 2.0 / 9.0 * (7 * std::cos(t) + 2 * std::cos(2 * t) + 9) * s * s;
}

ChainModel make_model(int sites, double horizon, bool corrupt) {
  ChainModel m(sites, horizon);
  return corrupt ? m.with_corrupted_free_hamiltonian() : m;
}

double max_curve_error(const Trajectory& traj, const CVector& psig, double (*curve)(double)) {
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k)
    worst = std::max(worst, std::abs(infidelity(traj.states[k], psig) - curve(traj.times[k])));
  return worst;
}

OracleCheck zero_control_curve(const char* name, ProblemKind kind, SolverMethod method, bool corrupt) {
  const double T = 4 * pi;
  const ChainModel model = make_model(3, T, corrupt);
  const ProblemSpec spec = kind == ProblemKind::Transfer ? ProblemSpec::transfer(model) : ProblemSpec::keeping(model, 1.0);
  const TimeGrid grid = TimeGrid::uniform(T, 999);
  const Trajectory traj =
      method == SolverMethod::Expm
          ? propagate_pconst(model, PConstControl::zeros(grid), spec.psi0)
          : propagate_continuous(model, ZeroControl{T}, ShiftFunction::linear(model), spec.psi0, grid, 1e-10);
  const auto curve = kind == ProblemKind::Transfer ? transfer_curve : keeping_curve;
  return {name, max_curve_error(traj, spec.psig, curve), method == SolverMethod::Expm ? 1e-10 : 1e-7};
}

OracleCheck keeping_revival(bool corrupt) {
  const ChainModel model = make_model(3, 2 * pi, corrupt);
  const ProblemSpec spec = ProblemSpec::keeping(model, 1.0);
  return {"keeping zero control F(2 pi)", infidelity(zero_control_state(model, 2 * pi, spec.psi0), spec.psig), 1e-10};
}

OracleCheck zero_control_adjoint(bool corrupt) {
  const double T = pi;
  const ChainModel model = make_model(3, T, corrupt);
  const ProblemSpec spec = ProblemSpec::transfer(model);
  const TimeGrid grid = TimeGrid::uniform(T, 200);
  const ZeroControl u{T};
  const ShiftFunction sigma = ShiftFunction::linear(model);
  const Trajectory psi = propagate_continuous(model, u, sigma, spec.psi0, grid, 1e-12);
  const AdjointTrajectory eta = solve_adjoint(model, u, sigma, psi, spec, 1e-12);
  const CVector eta_T = transversality(zero_control_state(model, T, spec.psi0), spec.psig);
  double worst = 0.0;
  for (std::size_t k = 0; k < eta.times.size(); ++k) {
    const CVector exact = expm_hermitian(model.free_hamiltonian(), -(T - eta.times[k])) * eta_T;
    worst = std::max(worst, (eta.costates[k] - exact).norm());
  }
  return {"zero control adjoint", worst, 1e-7};
}

OracleCheck zero_control_channel2(bool corrupt) {
  const double T = pi;
  const ChainModel model = make_model(3, T, corrupt);
  const ProblemSpec spec = ProblemSpec::transfer(model);
  const TimeGrid grid = TimeGrid::uniform(T, 200);
  const auto eval = evaluate_gradient(model, ZeroControl{T}, ShiftFunction::linear(model), spec, grid, 1e-10);
  double worst = 0.0;
  for (const auto& g : eval.grad.values) worst = std::max(worst, std::abs(g[1]));
  return {"zero control channel-2 gradient", worst, 1e-12};
}

OracleCheck gradient_fd(bool corrupt) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  for (int sites : {2, 3, 5}) {
    for (ProblemKind kind : {ProblemKind::Transfer, ProblemKind::Keeping}) {
      const double T = 2.0;
      const ChainModel model = make_model(sites, T, corrupt);
      ProblemSpec spec = kind == ProblemKind::Transfer ? ProblemSpec::transfer(model) : ProblemSpec::keeping(model, 1.0);
      spec.p_u = {0.3, 0.2};
      spec.quadrature = QuadratureRule::Simpson;
      const ControlBox box = ControlBox::make(T, 2.0, 1.0);
      const TimeGrid grid = TimeGrid::uniform(T, 8);
      const TimeGrid fine = grid.refined(16);
      const auto u = PLinearControl::sample(grid, [&](double t) {
        const ControlPair b = box.bound(t);
        return ControlPair{b[0] * unit(rng), b[1] * unit(rng)};
      });
      const auto du = PLinearControl::sample(grid, [&](double) { return ControlPair{unit(rng), unit(rng)}; });
      const ShiftFunction sigma = ShiftFunction::linear(model);
      auto phi = [&](double h) {
        PLinearControl v = u;
        for (std::size_t l = 0; l < 2; ++l)
          for (std::size_t k = 0; k < grid.size(); ++k) v.mutable_nodes(l)[k] += h * du.nodes(l)[k];
        const ControlSignal s = v;
        return objective_Phi(propagate_continuous(model, s, sigma, spec.psi0, fine, 1e-13), s, spec);
      };
      const double h = 1e-5;
      const double fd = (phi(h) - phi(-h)) / (2 * h);
      const auto eval = evaluate_gradient(model, u, sigma, spec, fine, 1e-13);
      const double an = l2_inner(eval.grad, du, QuadratureRule::Simpson);
      worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(fd), 1e-8));
    }
  }
  return {"gradient vs central difference", worst, 1e-5};
}

OracleCheck solver_equivalence(bool corrupt) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double T = pi;
  const ChainModel model = make_model(3, T, corrupt);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  const TimeGrid grid = TimeGrid::uniform(T, 20);
  const CVector psi0 = basis_state(3, 0);
  const std::vector<double> nu = shelf_bounds(grid, box);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> a(nu.size());
    for (std::size_t s = 0; s < a.size(); ++s) a[s] = nu[s] * unit(rng);
    const PConstControl pc(grid, a);
    const CVector exact = propagate_pconst_final(model, pc, psi0);
    const Trajectory rk = propagate_continuous(model, pc, ShiftFunction::midpoint(model.shift_rate(), grid), psi0,
                                               grid, 1e-12);
    worst = std::max(worst, (exact - rk.final_state()).norm());
  }
  return {"exponential product vs Runge-Kutta", worst, 1e-7};
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(bool corrupt) {
  return {
      zero_control_curve("transfer zero control (expm)", ProblemKind::Transfer, SolverMethod::Expm, corrupt),
      zero_control_curve("transfer zero control (rk)", ProblemKind::Transfer, SolverMethod::RungeKutta, corrupt),
      zero_control_curve("keeping zero control (expm)", ProblemKind::Keeping, SolverMethod::Expm, corrupt),
      zero_control_curve("keeping zero control (rk)", ProblemKind::Keeping, SolverMethod::RungeKutta, corrupt),
      keeping_revival(corrupt),
      zero_control_adjoint(corrupt),
      zero_control_channel2(corrupt),
      gradient_fd(corrupt),
      solver_equivalence(corrupt),
  };
}

int cmd_verify(std::ostream& report, bool corrupt) {
  bool ok = true;
  char line[160];
  std::snprintf(line, sizeof line, "%-40s %12s %10s  %s\n", "check", "error", "tolerance", "result");
  report << line;
  for (const auto& c : run_oracle_suite(corrupt)) {
    std::snprintf(line, sizeof line, "%-40s %12.3e %10.1e  %s\n", c.name.c_str(), c.error, c.tolerance,
                  c.passed() ? "PASS" : "FAIL");
    report << line;
    ok = ok && c.passed();
  }
  report << (ok ? "all checks passed\n" : "some checks FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace spinchain::app
