#pragma once

#include <optional>

#include "spinchain/grid.hpp"
#include "spinchain/types.hpp"

namespace spinchain {

/// Spin-1/2 chain of N sites in the single-excitation sector.
class ChainModel {
 public:
  ChainModel(int sites, double horizon, double coupling = 1.0);

  int sites() const noexcept { return sites_; }
  double horizon() const noexcept { return horizon_; }
  double coupling() const noexcept { return coupling_; }
  /// w = (N - 1) / T, the sweep rate of the parabola centre.
  double shift_rate() const noexcept { return shift_rate_; }
  const RMatrix& free_hamiltonian() const noexcept { return free_hamiltonian_; }

  /// Same model on a different horizon.
  ChainModel with_horizon(double horizon) const { return ChainModel(sites_, horizon, coupling_); }

  /// Copy whose H0(0,0) entry has its sign flipped. Fault-injection hook for `verify`.
  ChainModel with_corrupted_free_hamiltonian() const;

 private:
  int sites_;
  double horizon_;
  double coupling_;
  double shift_rate_;
  RMatrix free_hamiltonian_;
};

/// Tridiagonal H0 = -2J I + J (tridiag(1, 0, 1) + e_1 e_1^T + e_N e_N^T).
RMatrix build_free_hamiltonian(int sites, double coupling = 1.0);
inline RMatrix build_free_hamiltonian(const ChainModel& model) {
  return build_free_hamiltonian(model.sites(), model.coupling());
}

/// Unnormalized sinc, sin(x)/x with sinc(0) = 1.
double sinc(double x) noexcept;

/// Time-varying bound b(t) = bbar * sinc(2^q pi (t/T - 1/2)^q); vanishes at t = 0 and t = T.
class Envelope {
 public:
  Envelope(double amplitude, double horizon, int exponent = 8);

  double amplitude() const noexcept { return amplitude_; }
  double horizon() const noexcept { return horizon_; }
  int exponent() const noexcept { return exponent_; }
  double value(double t) const noexcept;

 private:
  double amplitude_;
  double horizon_;
  int exponent_;
};

inline double envelope_value(double t, const Envelope& env) noexcept { return env.value(t); }

/// Penalty weight S(t) = exp(C (t/T - 1/2)^2).
class WeightFunction {
 public:
  WeightFunction(double sharpness, double horizon);

  double sharpness() const noexcept { return sharpness_; }
  double horizon() const noexcept { return horizon_; }
  double value(double t) const noexcept;

 private:
  double sharpness_;
  double horizon_;
};

inline double weight_value(double t, const WeightFunction& wf) noexcept { return wf.value(t); }

/// Centre sweep sigma(t): either w t, or w times the midpoint of the grid interval containing t.
class ShiftFunction {
 public:
  static ShiftFunction linear(double rate);
  static ShiftFunction midpoint(double rate, TimeGrid grid);
  static ShiftFunction linear(const ChainModel& model) { return linear(model.shift_rate()); }

  double rate() const noexcept { return rate_; }
  bool piecewise_constant() const noexcept { return grid_.has_value(); }
  const std::optional<TimeGrid>& grid() const noexcept { return grid_; }
  double value(double t) const noexcept;

 private:
  ShiftFunction(double rate, std::optional<TimeGrid> grid) : rate_(rate), grid_(std::move(grid)) {}

  double rate_;
  std::optional<TimeGrid> grid_;
};

/// Diagonal of H1(t, u): g_m = u1 (m - 1 - sigma - u2)^2 for m = 1..N.
RVector control_hamiltonian_diag(double sigma, const ControlPair& u, int sites);
RVector control_hamiltonian_diag(double t, const ControlPair& u, const ChainModel& model,
                                 const ShiftFunction& sigma);

/// Default envelope exponent and penalty sharpness.
inline constexpr int kDefaultEnvelopeExponent = 8;
inline constexpr double kDefaultWeightSharpness = 20.0;

}  // namespace spinchain
