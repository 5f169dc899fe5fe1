#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "spinchain/grid.hpp"
#include "spinchain/model.hpp"
#include "spinchain/types.hpp"

namespace spinchain {

/// The rectangle Q_u(t) = [-b_1(t), b_1(t)] x [-b_2(t), b_2(t)].
struct ControlBox {
  std::array<Envelope, 2> channels;

  ControlBox(Envelope first, Envelope second) : channels{std::move(first), std::move(second)} {}
  /// Envelopes with amplitudes (bbar1, bbar2) and a shared exponent.
  static ControlBox make(double horizon, double amplitude1, double amplitude2,
                         int exponent = kDefaultEnvelopeExponent);

  double horizon() const noexcept { return channels[0].horizon(); }
  ControlPair bound(double t) const noexcept {
    return {channels[0].value(t), channels[1].value(t)};
  }
};

/// Componentwise clamp of v onto Q_u(t).
ControlPair project_to_box(const ControlPair& v, double t, const ControlBox& box) noexcept;

/// How the shelf bounds nu_{l,j} of a piecewise-constant control are derived from b_l.
enum class ShelfRule {
  Midpoint,         ///< nu_{l,j} = b_l(t_j + dt_j / 2)
  IntervalMinimum,  ///< nu_{l,j} = min of b_l over [t_j, t_{j+1}]
};

/// Piecewise-constant control on a grid. Coefficients are laid out as
/// (c_{1,1}, ..., c_{1,M}, c_{2,1}, ..., c_{2,M}); interval j is [t_{j-1}, t_j).
class PConstControl {
 public:
  PConstControl(TimeGrid grid, std::vector<double> coefficients);
  static PConstControl zeros(TimeGrid grid);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t intervals() const noexcept { return grid_.intervals(); }
  double horizon() const noexcept { return grid_.back(); }
  std::span<const double> coefficients() const noexcept { return coefficients_; }
  /// Value on 0-based interval j of channel l in {0, 1}.
  double coefficient(std::size_t channel, std::size_t interval) const noexcept {
    return coefficients_[channel * grid_.intervals() + interval];
  }
  ControlPair interval_value(std::size_t interval) const noexcept {
    return {coefficient(0, interval), coefficient(1, interval)};
  }
  ControlPair value(double t) const noexcept { return interval_value(grid_.locate(t)); }

  /// True when every |a_s| <= nu_s.
  bool respects(std::span<const double> shelf) const noexcept;

 private:
  TimeGrid grid_;
  std::vector<double> coefficients_;
};

/// Piecewise-linear control given by its node values on a grid.
class PLinearControl {
 public:
  PLinearControl(TimeGrid grid, std::vector<double> first, std::vector<double> second);
  static PLinearControl zeros(TimeGrid grid);
  /// Samples f at the grid nodes.
  template <class F>
  static PLinearControl sample(TimeGrid grid, F&& f) {
    std::vector<double> a(grid.size()), b(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const ControlPair v = f(grid[k]);
      a[k] = v[0];
      b[k] = v[1];
    }
    return PLinearControl(std::move(grid), std::move(a), std::move(b));
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  double horizon() const noexcept { return grid_.back(); }
  std::span<const double> nodes(std::size_t channel) const noexcept { return values_[channel]; }
  std::vector<double>& mutable_nodes(std::size_t channel) noexcept { return values_[channel]; }
  ControlPair node_value(std::size_t k) const noexcept { return {values_[0][k], values_[1][k]}; }
  ControlPair value(double t) const noexcept;

  /// |u_l(t_k)| <= b_l(t_k) at every node.
  bool feasible(const ControlBox& box) const noexcept;

 private:
  TimeGrid grid_;
  std::array<std::vector<double>, 2> values_;
};

/// Five-segment continuous control with parameters
/// x = (thetaL1, thetaR1, thetaL2, thetaR2, y1, y2, t1, t2, t3, t4).
class SpecialClassControl {
 public:
  static constexpr std::size_t kParameters = 10;
  enum Index : std::size_t {
    kThetaL1 = 0, kThetaR1, kThetaL2, kThetaR2, kPlateau1, kPlateau2, kT1, kT2, kT3, kT4
  };

  /// The switching times are sorted ascending before use.
  SpecialClassControl(std::span<const double> x, ControlBox box);

  std::span<const double> parameters() const noexcept { return x_; }
  const ControlBox& box() const noexcept { return box_; }
  double horizon() const noexcept { return box_.horizon(); }
  ControlPair value(double t) const noexcept;
  std::array<double, 4> switching_times() const noexcept { return {x_[kT1], x_[kT2], x_[kT3], x_[kT4]}; }

 private:
  double channel_value(std::size_t l, double t) const noexcept;

  std::array<double, kParameters> x_{};
  ControlBox box_;
};

/// Sorts the four switching times of a special-class parameter vector in place.
void repair_switching_times(std::span<double> x);

/// Per-coordinate closed interval.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double clamp(double v) const noexcept { return v < lo ? lo : (v > hi ? hi : v); }
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

/// Box Q_x with theta in [-1, 1], y_l in [-0.1 bbar_l, 0.1 bbar_l] and switching-time windows
/// [0.07, 0.13] T, [0.17, 0.23] T, [0.77, 0.83] T, [0.87, 0.93] T.
std::vector<Interval> default_special_class_bounds(const ControlBox& box);

/// Projected sine expansion u_l(t) = Pr(sum_i gamma_{l,i} sin(ceil(omega_{l,i}) pi t / T)).
/// Parameters y = (gamma_{1,1}, omega_{1,1}, ..., gamma_{1,K}, omega_{1,K}, gamma_{2,1}, ...).
class SineBasisControl {
 public:
  SineBasisControl(std::span<const double> y, ControlBox box);

  std::size_t terms() const noexcept { return y_.size() / 4; }
  std::span<const double> parameters() const noexcept { return y_; }
  const ControlBox& box() const noexcept { return box_; }
  double horizon() const noexcept { return box_.horizon(); }
  /// Sum of the sine terms before projection.
  ControlPair raw_value(double t) const noexcept;
  ControlPair value(double t) const noexcept { return project_to_box(raw_value(t), t, box_); }

 private:
  std::vector<double> y_;
  ControlBox box_;
};

/// Bounds Q_y with |gamma| <= amplitude_l and omega in [1, max_frequency].
std::vector<Interval> default_sine_basis_bounds(const ControlBox& box, std::size_t terms,
                                                double max_frequency);

struct ZeroControl {
  double horizon;
  ControlPair value(double) const noexcept { return {0.0, 0.0}; }
};

using ControlSignal =
    std::variant<ZeroControl, PConstControl, PLinearControl, SpecialClassControl, SineBasisControl>;

double horizon_of(const ControlSignal& control) noexcept;

/// u(t); throws std::invalid_argument for t outside [0, T].
ControlPair evaluate(const ControlSignal& control, double t);

/// Interior times where the control (or its derivative) may jump.
std::vector<double> breakpoints(const ControlSignal& control);

/// nu_{l,j} for every coefficient, laid out like PConstControl::coefficients().
std::vector<double> shelf_bounds(const TimeGrid& grid, const ControlBox& box,
                                 ShelfRule rule = ShelfRule::Midpoint);

/// Samples u at left endpoints t_j and clamps each sample to its shelf bound.
PConstControl discretize_pconst(const ControlSignal& control, const TimeGrid& grid,
                                const ControlBox& box, ShelfRule rule = ShelfRule::Midpoint);

/// Channel l (1 or 2) and range index r in 1..M for the 1-based coefficient index s in 1..2M.
struct CoefficientIndex {
  int channel;
  std::size_t range;
  friend bool operator==(const CoefficientIndex&, const CoefficientIndex&) = default;
};
CoefficientIndex decode_index(std::size_t s, std::size_t intervals);
std::size_t encode_index(const CoefficientIndex& index, std::size_t intervals);

}  // namespace spinchain
