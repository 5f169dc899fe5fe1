#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spinchain {

/// Strictly increasing sequence of time nodes t_0 < t_1 < ... < t_M.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> nodes);

  /// M equal intervals on [0, horizon]; endpoints are exact.
  static TimeGrid uniform(double horizon, std::size_t intervals);

  /// Splits every interval into `factor` equal pieces. The result contains all original nodes.
  TimeGrid refined(std::size_t factor) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t intervals() const noexcept { return nodes_.size() - 1; }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }
  double front() const noexcept { return nodes_.front(); }
  double back() const noexcept { return nodes_.back(); }
  double step(std::size_t j) const noexcept { return nodes_[j + 1] - nodes_[j]; }
  double midpoint(std::size_t j) const noexcept { return 0.5 * (nodes_[j] + nodes_[j + 1]); }
  std::span<const double> nodes() const noexcept { return nodes_; }

  /// Interval index j with t in [t_j, t_{j+1}). Times at or past the last node map to the
  /// last interval, times before the first node to interval 0.
  std::size_t locate(double t) const noexcept;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<double> nodes_;
};

/// Quadrature used for every time integral over a trajectory grid.
enum class QuadratureRule { Trapezoid, Simpson };

/// Weights w_k such that sum_k w_k f(t_k) approximates the integral over the grid span.
/// Simpson needs an even number of intervals and pairs them as (0,1), (2,3), ...
std::vector<double> quadrature_weights(std::span<const double> nodes, QuadratureRule rule);

}  // namespace spinchain
