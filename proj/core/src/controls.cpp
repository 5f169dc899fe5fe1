#include "spinchain/controls.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spinchain {

namespace {

void require_spans_horizon(const TimeGrid& grid, const char* who) {
  if (grid.front() != 0.0) throw std::invalid_argument(std::string(who) + ": grid must start at 0");
}

}  // namespace

ControlBox ControlBox::make(double horizon, double amplitude1, double amplitude2, int exponent) {
  return ControlBox(Envelope(amplitude1, horizon, exponent), Envelope(amplitude2, horizon, exponent));
}

ControlPair project_to_box(const ControlPair& v, double t, const ControlBox& box) noexcept {
  const ControlPair b = box.bound(t);
  return {std::clamp(v[0], -b[0], b[0]), std::clamp(v[1], -b[1], b[1])};
}

// ---- PConst -----------------------------------------------------------------

PConstControl::PConstControl(TimeGrid grid, std::vector<double> coefficients)
    : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
  require_spans_horizon(grid_, "PConstControl");
  if (coefficients_.size() != 2 * grid_.intervals())
    throw std::invalid_argument("PConstControl: need 2M coefficients");
  for (double a : coefficients_)
    if (!std::isfinite(a)) throw std::invalid_argument("PConstControl: non-finite coefficient");
}

PConstControl PConstControl::zeros(TimeGrid grid) {
  const std::size_t n = 2 * grid.intervals();
  return PConstControl(std::move(grid), std::vector<double>(n, 0.0));
}

bool PConstControl::respects(std::span<const double> shelf) const noexcept {
  if (shelf.size() != coefficients_.size()) return false;
  for (std::size_t s = 0; s < shelf.size(); ++s)
    if (std::abs(coefficients_[s]) > shelf[s]) return false;
  return true;
}

// ---- PLinear ----------------------------------------------------------------

PLinearControl::PLinearControl(TimeGrid grid, std::vector<double> first, std::vector<double> second)
    : grid_(std::move(grid)), values_{std::move(first), std::move(second)} {
  require_spans_horizon(grid_, "PLinearControl");
  for (const auto& v : values_) {
    if (v.size() != grid_.size()) throw std::invalid_argument("PLinearControl: need one value per node");
    for (double a : v)
      if (!std::isfinite(a)) throw std::invalid_argument("PLinearControl: non-finite node value");
  }
}

PLinearControl PLinearControl::zeros(TimeGrid grid) {
  const std::size_t n = grid.size();
  return PLinearControl(std::move(grid), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

ControlPair PLinearControl::value(double t) const noexcept {
  const std::size_t j = grid_.locate(t);
  const double a = grid_[j];
  const double h = grid_.step(j);
  const double s = std::clamp((t - a) / h, 0.0, 1.0);
  ControlPair out;
  for (std::size_t l = 0; l < 2; ++l) out[l] = (1.0 - s) * values_[l][j] + s * values_[l][j + 1];
  return out;
}

bool PLinearControl::feasible(const ControlBox& box) const noexcept {
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    const ControlPair b = box.bound(grid_[k]);
    for (std::size_t l = 0; l < 2; ++l)
      if (std::abs(values_[l][k]) > b[l]) return false;
  }
  return true;
}

// ---- Special class ------------------------------------------------------------

void repair_switching_times(std::span<double> x) {
  if (x.size() != SpecialClassControl::kParameters)
    throw std::invalid_argument("repair_switching_times: need 10 parameters");
  std::sort(x.begin() + SpecialClassControl::kT1, x.end());
}

SpecialClassControl::SpecialClassControl(std::span<const double> x, ControlBox box)
    : box_(std::move(box)) {
  if (x.size() != kParameters) throw std::invalid_argument("SpecialClassControl: need 10 parameters");
  std::copy(x.begin(), x.end(), x_.begin());
  for (double v : x_)
    if (!std::isfinite(v)) throw std::invalid_argument("SpecialClassControl: non-finite parameter");
  repair_switching_times(x_);
  if (x_[kT1] < 0.0 || x_[kT4] > horizon())
    throw std::invalid_argument("SpecialClassControl: switching times must lie in [0, T]");
}

double SpecialClassControl::channel_value(std::size_t l, double t) const noexcept {
  const Envelope& b = box_.channels[l];
  const double theta_l = x_[l == 0 ? kThetaL1 : kThetaL2];
  const double theta_r = x_[l == 0 ? kThetaR1 : kThetaR2];
  const double y = x_[l == 0 ? kPlateau1 : kPlateau2];
  const double t1 = x_[kT1], t2 = x_[kT2], t3 = x_[kT3], t4 = x_[kT4];
  if (t < t1) return theta_l * b.value(t);
  if (t < t2) {
    const double left = theta_l * b.value(t1);
    const double d = t2 - t1;
    return (y - left) / (d * d) * (t - t1) * (t - t1) + left;
  }
  if (t < t3) return y;
  if (t < t4) {
    const double right = theta_r * b.value(t4);
    const double d = t4 - t3;
    return (y - right) / (d * d) * (t - t4) * (t - t4) + right;
  }
  return theta_r * b.value(t);
}

ControlPair SpecialClassControl::value(double t) const noexcept {
  return {channel_value(0, t), channel_value(1, t)};
}

std::vector<Interval> default_special_class_bounds(const ControlBox& box) {
  const double T = box.horizon();
  const double y1 = 0.1 * box.channels[0].amplitude();
  const double y2 = 0.1 * box.channels[1].amplitude();
  return {{-1.0, 1.0},       {-1.0, 1.0},       {-1.0, 1.0},       {-1.0, 1.0},
          {-y1, y1},         {-y2, y2},         {0.07 * T, 0.13 * T}, {0.17 * T, 0.23 * T},
          {0.77 * T, 0.83 * T}, {0.87 * T, 0.93 * T}};
}

// ---- Sine basis ---------------------------------------------------------------

SineBasisControl::SineBasisControl(std::span<const double> y, ControlBox box)
    : y_(y.begin(), y.end()), box_(std::move(box)) {
  if (y_.empty() || y_.size() % 4 != 0)
    throw std::invalid_argument("SineBasisControl: need 4 K parameters with K >= 1");
  for (double v : y_)
    if (!std::isfinite(v)) throw std::invalid_argument("SineBasisControl: non-finite parameter");
}

ControlPair SineBasisControl::raw_value(double t) const noexcept {
  const std::size_t k = terms();
  const double phase = std::numbers::pi * t / horizon();
  ControlPair out{0.0, 0.0};
  for (std::size_t l = 0; l < 2; ++l) {
    for (std::size_t i = 0; i < k; ++i) {
      const double gamma = y_[2 * (l * k + i)];
      const double omega = std::ceil(y_[2 * (l * k + i) + 1]);
      out[l] += gamma * std::sin(omega * phase);
    }
  }
  return out;
}

std::vector<Interval> default_sine_basis_bounds(const ControlBox& box, std::size_t terms,
                                                double max_frequency) {
  if (terms == 0) throw std::invalid_argument("default_sine_basis_bounds: zero terms");
  if (!(max_frequency >= 1.0))
    throw std::invalid_argument("default_sine_basis_bounds: max_frequency must be >= 1");
  std::vector<Interval> bounds;
  for (std::size_t l = 0; l < 2; ++l) {
    const double a = box.channels[l].amplitude();
    for (std::size_t i = 0; i < terms; ++i) {
      bounds.push_back({-a, a});
      bounds.push_back({1.0, max_frequency});
    }
  }
  return bounds;
}

// ---- Variant dispatch ---------------------------------------------------------------

double horizon_of(const ControlSignal& control) noexcept {
  return std::visit([](const auto& c) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(c)>, ZeroControl>) return c.horizon;
    else return c.horizon();
  }, control);
}

ControlPair evaluate(const ControlSignal& control, double t) {
  const double T = horizon_of(control);
  if (!(t >= 0.0 && t <= T)) throw std::invalid_argument("evaluate: t outside [0, T]");
  return std::visit([t](const auto& c) { return c.value(t); }, control);
}

std::vector<double> breakpoints(const ControlSignal& control) {
  std::vector<double> out;
  auto interior = [&](std::span<const double> nodes) {
    for (std::size_t k = 1; k + 1 < nodes.size(); ++k) out.push_back(nodes[k]);
  };
  if (const auto* p = std::get_if<PConstControl>(&control)) interior(p->grid().nodes());
  else if (const auto* q = std::get_if<PLinearControl>(&control)) interior(q->grid().nodes());
  else if (const auto* s = std::get_if<SpecialClassControl>(&control)) {
    for (double t : s->switching_times())
      if (t > 0.0 && t < s->horizon()) out.push_back(t);
  }
  return out;
}

std::vector<double> shelf_bounds(const TimeGrid& grid, const ControlBox& box, ShelfRule rule) {
  const std::size_t m = grid.intervals();
  std::vector<double> nu(2 * m);
  for (std::size_t l = 0; l < 2; ++l) {
    const Envelope& b = box.channels[l];
    for (std::size_t j = 0; j < m; ++j) {
      // b is increasing on [0, T/2] and decreasing on [T/2, T] (unimodal), so the interval
      // minimum sits at an end point.
      nu[l * m + j] = rule == ShelfRule::Midpoint ? b.value(grid.midpoint(j))
                                                  : std::min(b.value(grid[j]), b.value(grid[j + 1]));
    }
  }
  return nu;
}

PConstControl discretize_pconst(const ControlSignal& control, const TimeGrid& grid,
                                const ControlBox& box, ShelfRule rule) {
  const std::size_t m = grid.intervals();
  const std::vector<double> nu = shelf_bounds(grid, box, rule);
  std::vector<double> a(2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    const ControlPair u = evaluate(control, grid[j]);
    for (std::size_t l = 0; l < 2; ++l) {
      const double bound = nu[l * m + j];
      a[l * m + j] = std::clamp(u[l], -bound, bound);
    }
  }
  return PConstControl(grid, std::move(a));
}

CoefficientIndex decode_index(std::size_t s, std::size_t intervals) {
  if (intervals == 0 || s < 1 || s > 2 * intervals)
    throw std::invalid_argument("decode_index: s must lie in [1, 2M]");
  const std::size_t rem = s % intervals;
  if (rem != 0) return {static_cast<int>(s / intervals) + 1, rem};
  return {static_cast<int>(s / intervals), intervals};
}

std::size_t encode_index(const CoefficientIndex& index, std::size_t intervals) {
  if ((index.channel != 1 && index.channel != 2) || index.range < 1 || index.range > intervals)
    throw std::invalid_argument("encode_index: index out of range");
  return static_cast<std::size_t>(index.channel - 1) * intervals + index.range;
}

}  // namespace spinchain
