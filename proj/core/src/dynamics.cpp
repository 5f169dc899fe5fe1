#include "spinchain/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinchain {

ControlledHamiltonian::ControlledHamiltonian(const ChainModel& model, const ControlSignal& control,
                                             const ShiftFunction& sigma)
    : model_(model), control_(control), sigma_(sigma) {}

RVector ControlledHamiltonian::control_diag(double t, const Segment& segment) const {
  const double tl = std::clamp(segment.lookup(t), 0.0, model_.horizon());
  const ControlPair u = evaluate(control_, tl);
  return control_hamiltonian_diag(sigma_.value(tl), u, model_.sites());
}

void ControlledHamiltonian::realified_rhs(double t, const RVector& y, RVector& dy,
                                          const Segment& segment) const {
  const Eigen::Index n = model_.sites();
  const RVector g = control_diag(t, segment);
  const auto re = y.head(n);
  const auto im = y.tail(n);
  const RMatrix& h0 = model_.free_hamiltonian();
  dy.head(n).noalias() = h0 * im;
  dy.head(n).array() += g.array() * im.array();
  dy.tail(n).noalias() = -(h0 * re);
  dy.tail(n).array() -= g.array() * re.array();
}

CVector ControlledHamiltonian::derivative(double t, const CVector& psi, const Segment& segment) const {
  const RVector g = control_diag(t, segment);
  CVector hpsi = model_.free_hamiltonian().cast<Complex>() * psi;
  hpsi.array() += g.cast<Complex>().array() * psi.array();
  return Complex(0.0, -1.0) * hpsi;
}

std::vector<double> ControlledHamiltonian::breakpoints() const {
  std::vector<double> out = spinchain::breakpoints(control_);
  if (sigma_.piecewise_constant()) {
    const auto nodes = sigma_.grid()->nodes();
    for (std::size_t k = 1; k + 1 < nodes.size(); ++k) out.push_back(nodes[k]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RVector realify(const CVector& psi) {
  const Eigen::Index n = psi.size();
  RVector y(2 * n);
  y.head(n) = psi.real();
  y.tail(n) = psi.imag();
  return y;
}

CVector complexify(const RVector& y) {
  const Eigen::Index n = y.size() / 2;
  CVector psi(n);
  psi.real() = y.head(n);
  psi.imag() = y.tail(n);
  return psi;
}

CVector basis_state(int sites, int site) {
  if (site < 0 || site >= sites) throw std::invalid_argument("basis_state: site out of range");
  CVector e = CVector::Zero(sites);
  e[site] = 1.0;
  return e;
}

void require_unit_norm(const CVector& psi, double tol, const char* what) {
  const double norm = psi.norm();
  if (!(std::abs(norm - 1.0) <= tol))
    throw std::invalid_argument(std::string(what) + ": expected a unit vector, norm = " +
                                std::to_string(norm));
}

namespace {

void check_pconst_inputs(const ChainModel& model, const PConstControl& control, const CVector& psi0) {
  if (psi0.size() != model.sites())
    throw std::invalid_argument("propagate_pconst: psi0 has wrong dimension");
  require_unit_norm(psi0, 1e-8, "propagate_pconst");
  if (std::abs(control.horizon() - model.horizon()) > 1e-12 * model.horizon())
    throw std::invalid_argument("propagate_pconst: control grid must end at T");
}

RMatrix interval_hamiltonian(const ChainModel& model, const PConstControl& control, std::size_t j) {
  const double sigma_mid = model.shift_rate() * control.grid().midpoint(j);
  RMatrix h = model.free_hamiltonian();
  h.diagonal() += control_hamiltonian_diag(sigma_mid, control.interval_value(j), model.sites());
  return h;
}

}  // namespace

Propagator build_propagator(const ChainModel& model, const PConstControl& control,
                            ExpmMethod method) {
  Propagator p;
  p.steps.reserve(control.intervals());
  for (std::size_t j = 0; j < control.intervals(); ++j)
    p.steps.push_back(unitary_step(interval_hamiltonian(model, control, j), control.grid().step(j), method));
  return p;
}

Trajectory propagate_pconst(const ChainModel& model, const PConstControl& control,
                            const CVector& psi0, ExpmMethod method) {
  check_pconst_inputs(model, control, psi0);
  Trajectory out;
  const auto nodes = control.grid().nodes();
  out.times.assign(nodes.begin(), nodes.end());
  out.states.reserve(nodes.size());
  out.states.push_back(psi0);
  for (std::size_t j = 0; j < control.intervals(); ++j) {
    const CMatrix u = unitary_step(interval_hamiltonian(model, control, j), control.grid().step(j), method);
    out.states.push_back(u * out.states.back());
  }
  return out;
}

CVector propagate_pconst_final(const ChainModel& model, const PConstControl& control,
                               const CVector& psi0, ExpmMethod method) {
  check_pconst_inputs(model, control, psi0);
  CVector psi = psi0;
  for (std::size_t j = 0; j < control.intervals(); ++j)
    psi = unitary_step(interval_hamiltonian(model, control, j), control.grid().step(j), method) * psi;
  return psi;
}

Trajectory propagate_continuous(const ChainModel& model, const ControlSignal& control,
                                const ShiftFunction& sigma, const CVector& psi0,
                                const TimeGrid& output_grid, double tol, OdeStats* stats) {
  if (!(tol > 0.0)) throw std::invalid_argument("propagate_continuous: tol must be > 0");
  if (psi0.size() != model.sites())
    throw std::invalid_argument("propagate_continuous: psi0 has wrong dimension");
  require_unit_norm(psi0, 1e-8, "propagate_continuous");
  const double T = model.horizon();
  if (output_grid.front() != 0.0 || std::abs(output_grid.back() - T) > 1e-12 * T)
    throw std::invalid_argument("propagate_continuous: output grid must span [0, T]");

  const ControlledHamiltonian ham(model, control, sigma);
  const std::vector<double> breaks = ham.breakpoints();
  Trajectory out;
  out.times.assign(output_grid.nodes().begin(), output_grid.nodes().end());
  out.times.back() = T;
  out.states.resize(out.times.size());

  OdeOptions options;
  options.abs_tol = kLocalToleranceFactor * tol;
  options.rel_tol = kLocalToleranceFactor * tol;
  const OdeStats s = integrate_dopri5(
      [&ham](double t, const RVector& y, RVector& dy, const Segment& seg) {
        ham.realified_rhs(t, y, dy, seg);
      },
      0.0, T, realify(psi0), out.times, breaks, options,
      [&out](std::size_t i, const RVector& y) { out.states[i] = complexify(y); });
  if (stats) *stats = s;
  return out;
}

CVector zero_control_state(const ChainModel& model, double t, const CVector& psi0) {
  if (t == 0.0) return psi0;
  return expm_hermitian(model.free_hamiltonian(), t) * psi0;
}

StateInterpolant::StateInterpolant(const Trajectory& trajectory, const ControlledHamiltonian& ham)
    : trajectory_(trajectory) {
  const std::size_t n = trajectory.size();
  if (n < 2) throw std::invalid_argument("StateInterpolant: need at least two nodes");
  left_derivative_.reserve(n - 1);
  right_derivative_.reserve(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Segment seg{trajectory.times[k], trajectory.times[k + 1]};
    left_derivative_.push_back(ham.derivative(seg.lo, trajectory.states[k], seg));
    right_derivative_.push_back(ham.derivative(seg.hi, trajectory.states[k + 1], seg));
  }
}

CVector StateInterpolant::operator()(double t, const Segment& segment) const {
  const auto& times = trajectory_.times;
  const double tl = segment.lookup(t);
  std::size_t k = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), tl) - times.begin());
  k = k == 0 ? 0 : std::min(k - 1, times.size() - 2);
  const double a = times[k];
  const double h = times[k + 1] - a;
  const double s = (t - a) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * trajectory_.states[k] + (h10 * h) * left_derivative_[k] +
         h01 * trajectory_.states[k + 1] + (h11 * h) * right_derivative_[k];
}

}  // namespace spinchain
