#include "spinchain/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinchain {

ChainModel::ChainModel(int sites, double horizon, double coupling)
    : sites_(sites), horizon_(horizon), coupling_(coupling) {
  if (sites < 2) throw std::invalid_argument("ChainModel: need N >= 2 sites");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("ChainModel: horizon T must be finite and > 0");
  if (!std::isfinite(coupling)) throw std::invalid_argument("ChainModel: coupling must be finite");
  shift_rate_ = static_cast<double>(sites - 1) / horizon;
  free_hamiltonian_ = build_free_hamiltonian(sites, coupling);
}

ChainModel ChainModel::with_corrupted_free_hamiltonian() const {
  ChainModel copy = *this;
  copy.free_hamiltonian_(0, 0) = -copy.free_hamiltonian_(0, 0);
  return copy;
}

RMatrix build_free_hamiltonian(int sites, double coupling) {
  if (sites < 2) throw std::invalid_argument("build_free_hamiltonian: need N >= 2");
  RMatrix h = RMatrix::Zero(sites, sites);
  for (int m = 0; m < sites; ++m) {
    h(m, m) = -2.0 * coupling;
    if (m + 1 < sites) {
      h(m, m + 1) = coupling;
      h(m + 1, m) = coupling;
    }
  }
  h(0, 0) += coupling;
  h(sites - 1, sites - 1) += coupling;
  return h;
}

double sinc(double x) noexcept {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

Envelope::Envelope(double amplitude, double horizon, int exponent)
    : amplitude_(amplitude), horizon_(horizon), exponent_(exponent) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("Envelope: amplitude must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("Envelope: horizon must be > 0");
  if (exponent < 2 || exponent % 2 != 0)
    throw std::invalid_argument("Envelope: exponent must be an even integer >= 2");
}

double Envelope::value(double t) const noexcept {
  // sinc(+-pi) is only zero to rounding; pin the switch-off exactly.
  if (t <= 0.0 || t >= horizon_) return 0.0;
  const double s = t / horizon_ - 0.5;
  // 2^q s^q = (2 s)^q; exact at the endpoints where 2 s = +-1.
  const double arg = std::numbers::pi * std::pow(2.0 * s, exponent_);
  return amplitude_ * sinc(arg);
}

WeightFunction::WeightFunction(double sharpness, double horizon)
    : sharpness_(sharpness), horizon_(horizon) {
  if (!(sharpness > 0.0)) throw std::invalid_argument("WeightFunction: sharpness must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("WeightFunction: horizon must be > 0");
}

double WeightFunction::value(double t) const noexcept {
  const double s = t / horizon_ - 0.5;
  return std::exp(sharpness_ * s * s);
}

ShiftFunction ShiftFunction::linear(double rate) { return ShiftFunction(rate, std::nullopt); }

ShiftFunction ShiftFunction::midpoint(double rate, TimeGrid grid) {
  return ShiftFunction(rate, std::move(grid));
}

double ShiftFunction::value(double t) const noexcept {
  if (!grid_) return rate_ * t;
  return rate_ * grid_->midpoint(grid_->locate(t));
}

RVector control_hamiltonian_diag(double sigma, const ControlPair& u, int sites) {
  RVector g(sites);
  for (int k = 0; k < sites; ++k) {
    const double d = static_cast<double>(k) - sigma - u[1];
    g[k] = u[0] * d * d;
  }
  return g;
}

RVector control_hamiltonian_diag(double t, const ControlPair& u, const ChainModel& model,
                                 const ShiftFunction& sigma) {
  return control_hamiltonian_diag(sigma.value(t), u, model.sites());
}

}  // namespace spinchain
