#include "spinchain/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinchain {

ProblemSpec ProblemSpec::transfer(const ChainModel& model) {
  const double T = model.horizon();
  return ProblemSpec{ProblemKind::Transfer,
                     basis_state(model.sites(), 0),
                     basis_state(model.sites(), model.sites() - 1),
                     0.0,
                     {0.0, 0.0},
                     0.0,
                     0.0,
                     {WeightFunction(kDefaultWeightSharpness, T), WeightFunction(kDefaultWeightSharpness, T)},
                     QuadratureRule::Trapezoid};
}

ProblemSpec ProblemSpec::keeping(const ChainModel& model, double p_psi) {
  ProblemSpec spec = transfer(model);
  spec.kind = ProblemKind::Keeping;
  spec.psi0 = spec.psig;
  spec.p_psi = p_psi;
  return spec;
}

void ProblemSpec::validate(int sites) const {
  if (psi0.size() != sites || psig.size() != sites)
    throw std::invalid_argument("ProblemSpec: psi0 and psig must have N components");
  require_unit_norm(psi0, 1e-8, "ProblemSpec psi0");
  require_unit_norm(psig, 1e-8, "ProblemSpec psig");
  if (p_psi < 0.0 || p_u[0] < 0.0 || p_u[1] < 0.0 || p_x < 0.0 || p_y < 0.0)
    throw std::invalid_argument("ProblemSpec: penalty weights must be >= 0");
  const double overlap = std::norm(psig.dot(psi0));
  if (kind == ProblemKind::Transfer && !(overlap < 1.0 - 1e-12))
    throw std::invalid_argument("ProblemSpec: transfer needs |<psi0, psig>|^2 < 1");
  if (kind == ProblemKind::Keeping) {
    if (std::abs(overlap - 1.0) > 1e-10)
      throw std::invalid_argument("ProblemSpec: keeping needs |<psi0, psig>|^2 = 1");
    if (!(p_psi > 0.0)) throw std::invalid_argument("ProblemSpec: keeping needs P_psi > 0");
  }
}

double infidelity(const CVector& psi, const CVector& psig) {
  if (psi.size() != psig.size()) throw std::invalid_argument("infidelity: dimension mismatch");
  require_unit_norm(psi, 1e-8, "infidelity psi");
  require_unit_norm(psig, 1e-8, "infidelity psig");
  // Eigen's dot conjugates the left operand: psig^H psi.
  const double f = 1.0 - std::norm(psig.dot(psi));
  return std::clamp(f, 0.0, 1.0);
}

namespace {

double keeping_integral(const Trajectory& trajectory, const ProblemSpec& spec) {
  const std::vector<double> w = quadrature_weights(trajectory.times, spec.quadrature);
  double sum = 0.0;
  for (std::size_t k = 0; k < trajectory.size(); ++k)
    sum += w[k] * infidelity(trajectory.states[k], spec.psig);
  return sum;
}

}  // namespace

double objective_I(const Trajectory& trajectory, const ProblemSpec& spec) {
  if (trajectory.empty()) throw std::invalid_argument("objective_I: empty trajectory");
  const double terminal = infidelity(trajectory.final_state(), spec.psig);
  if (spec.kind == ProblemKind::Transfer) return terminal;
  return terminal + spec.p_psi * keeping_integral(trajectory, spec);
}

double control_penalty(const ControlSignal& control, std::span<const double> nodes,
                       const ProblemSpec& spec) {
  if (spec.p_u[0] == 0.0 && spec.p_u[1] == 0.0) return 0.0;
  const std::vector<double> w = quadrature_weights(nodes, spec.quadrature);
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const ControlPair u = evaluate(control, nodes[k]);
    double integrand = 0.0;
    for (std::size_t l = 0; l < 2; ++l)
      integrand += spec.p_u[l] * spec.weights[l].value(nodes[k]) * u[l] * u[l];
    sum += w[k] * integrand;
  }
  return sum;
}

double objective_Phi(const Trajectory& trajectory, const ControlSignal& control,
                     const ProblemSpec& spec) {
  return objective_I(trajectory, spec) + control_penalty(control, trajectory.times, spec);
}

double sample_l1(const PConstControl& control) {
  double sum = 0.0;
  for (double a : control.coefficients()) sum += std::abs(a);
  return sum;
}

double objective_f3(std::span<const double> x, const ChainModel& model, const ProblemSpec& spec,
                    const TimeGrid& grid, const ControlBox& box, ShelfRule rule) {
  const SpecialClassControl control(x, box);
  const PConstControl a = discretize_pconst(control, grid, box, rule);
  const CVector psi_T = propagate_pconst_final(model, a, spec.psi0);
  const double value = infidelity(psi_T, spec.psig);
  return spec.p_x == 0.0 ? value : value + spec.p_x * sample_l1(a);
}

double objective_f4(std::span<const double> y, const ChainModel& model, const ProblemSpec& spec,
                    const TimeGrid& grid, const ControlBox& box, ShelfRule rule) {
  const SineBasisControl control(y, box);
  const PConstControl a = discretize_pconst(control, grid, box, rule);
  const Trajectory traj = propagate_pconst(model, a, spec.psi0);
  double worst = 0.0;
  for (std::size_t j = 1; j < traj.size(); ++j)
    worst = std::max(worst, infidelity(traj.states[j], spec.psig));
  return spec.p_y == 0.0 ? worst : worst + spec.p_y * sample_l1(a);
}

}  // namespace spinchain
