#include "spinchain/adjoint.hpp"

#include <cmath>
#include <stdexcept>

namespace spinchain {

CVector transversality(const CVector& psi_final, const CVector& psig) {
  if (psi_final.size() != psig.size()) throw std::invalid_argument("transversality: dimension mismatch");
  require_unit_norm(psi_final, 1e-8, "transversality");
  return psig.dot(psi_final) * psig;
}

AdjointTrajectory solve_adjoint(const ChainModel& model, const ControlSignal& control,
                                const ShiftFunction& sigma, const Trajectory& psi,
                                const ProblemSpec& spec, double tol) {
  if (psi.size() < 2) throw std::invalid_argument("solve_adjoint: forward trajectory too short");
  const double T = model.horizon();
  if (psi.times.front() != 0.0 || std::abs(psi.times.back() - T) > 1e-12 * T)
    throw std::invalid_argument("solve_adjoint: forward trajectory must span [0, T]");
  if (std::abs(horizon_of(control) - T) > 1e-12 * T)
    throw std::invalid_argument("solve_adjoint: control horizon differs from the model's");

  const ControlledHamiltonian ham(model, control, sigma);
  const bool keeping = spec.kind == ProblemKind::Keeping && spec.p_psi != 0.0;
  const StateInterpolant interp(psi, ham);
  const Eigen::Index n = model.sites();
  const CVector& psig = spec.psig;
  const double p_psi = spec.p_psi;

  auto rhs = [&](double t, const RVector& y, RVector& dy, const Segment& seg) {
    ham.realified_rhs(t, y, dy, seg);
    if (keeping) {
      const CVector state = interp(t, seg);
      const CVector source = (-p_psi * psig.dot(state)) * psig;
      dy.head(n) += source.real();
      dy.tail(n) += source.imag();
    }
  };

  // Outputs in backward order.
  const std::size_t count = psi.size();
  std::vector<double> outputs(count);
  for (std::size_t i = 0; i < count; ++i) outputs[i] = psi.times[count - 1 - i];

  AdjointTrajectory eta;
  eta.times = psi.times;
  eta.costates.resize(count);
  OdeOptions options;
  options.abs_tol = kLocalToleranceFactor * tol;
  options.rel_tol = kLocalToleranceFactor * tol;
  const std::vector<double> breaks = ham.breakpoints();
  integrate_dopri5(rhs, psi.times.back(), 0.0, realify(transversality(psi.final_state(), psig)),
                   outputs, breaks, options, [&](std::size_t i, const RVector& y) {
                     eta.costates[count - 1 - i] = complexify(y);
                   });
  return eta;
}

AdjointTrajectory solve_adjoint_pconst(const ChainModel& model, const PConstControl& control,
                                       const Trajectory& psi, const ProblemSpec& spec,
                                       ExpmMethod method) {
  if (spec.kind != ProblemKind::Transfer)
    throw std::invalid_argument("solve_adjoint_pconst: only the source-free transfer adjoint is exact");
  if (psi.size() != control.grid().size())
    throw std::invalid_argument("solve_adjoint_pconst: trajectory must live on the control grid");
  const Propagator prop = build_propagator(model, control, method);
  AdjointTrajectory eta;
  eta.times = psi.times;
  eta.costates.resize(psi.size());
  eta.costates.back() = transversality(psi.final_state(), spec.psig);
  for (std::size_t j = control.intervals(); j-- > 0;)
    eta.costates[j] = prop.steps[j].adjoint() * eta.costates[j + 1];
  return eta;
}

GradientSignal gradient(const ChainModel& model, const ControlSignal& control,
                        const ShiftFunction& sigma, const Trajectory& psi,
                        const AdjointTrajectory& eta, const ProblemSpec& spec) {
  if (psi.size() != eta.times.size() || eta.costates.size() != psi.size())
    throw std::invalid_argument("gradient: state and costate grids differ in size");
  for (std::size_t k = 0; k < psi.size(); ++k)
    if (std::abs(psi.times[k] - eta.times[k]) > 1e-12 * (1.0 + std::abs(psi.times[k])))
      throw std::invalid_argument("gradient: state and costate grids differ");

  const int n = model.sites();
  GradientSignal g;
  g.times = psi.times;
  g.values.resize(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double t = psi.times[k];
    const ControlPair u = evaluate(control, t);
    const double s = sigma.value(t);
    const CVector& p = psi.states[k];
    const CVector& e = eta.costates[k];
    Complex pair1 = 0.0;  // <eta, dH1/du1 psi>
    Complex pair2 = 0.0;  // <eta, dH1/du2 psi>
    for (int m = 0; m < n; ++m) {
      const double d = static_cast<double>(m) - s - u[1];
      const Complex z = std::conj(e[m]) * p[m];
      pair1 += d * d * z;
      pair2 += -2.0 * u[0] * d * z;
    }
    g.values[k][0] = -2.0 * pair1.imag() + 2.0 * spec.p_u[0] * spec.weights[0].value(t) * u[0];
    g.values[k][1] = -2.0 * pair2.imag() + 2.0 * spec.p_u[1] * spec.weights[1].value(t) * u[1];
  }
  return g;
}

double l2_inner(const GradientSignal& grad, const ControlSignal& direction, QuadratureRule rule) {
  const std::vector<double> w = quadrature_weights(grad.times, rule);
  double sum = 0.0;
  for (std::size_t k = 0; k < grad.times.size(); ++k) {
    const ControlPair v = evaluate(direction, grad.times[k]);
    sum += w[k] * (grad.values[k][0] * v[0] + grad.values[k][1] * v[1]);
  }
  return sum;
}

double pmp_residual(const ControlSignal& control, const GradientSignal& grad, double alpha,
                    const ControlBox& box, QuadratureRule rule) {
  if (!(alpha > 0.0)) throw std::invalid_argument("pmp_residual: alpha must be > 0");
  const std::vector<double> w = quadrature_weights(grad.times, rule);
  double sum = 0.0;
  for (std::size_t k = 0; k < grad.times.size(); ++k) {
    const double t = grad.times[k];
    const ControlPair u = evaluate(control, t);
    const ControlPair moved{u[0] - alpha * grad.values[k][0], u[1] - alpha * grad.values[k][1]};
    const ControlPair proj = project_to_box(moved, t, box);
    const double d0 = u[0] - proj[0];
    const double d1 = u[1] - proj[1];
    sum += w[k] * (d0 * d0 + d1 * d1);
  }
  return std::sqrt(sum);
}

GradientEvaluation evaluate_gradient(const ChainModel& model, const ControlSignal& control,
                                     const ShiftFunction& sigma, const ProblemSpec& spec,
                                     const TimeGrid& grid, double tol) {
  GradientEvaluation out;
  out.psi = propagate_continuous(model, control, sigma, spec.psi0, grid, tol);
  out.objective = objective_Phi(out.psi, control, spec);
  out.eta = solve_adjoint(model, control, sigma, out.psi, spec, tol);
  out.grad = gradient(model, control, sigma, out.psi, out.eta, spec);
  return out;
}

}  // namespace spinchain
