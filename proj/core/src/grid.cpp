#include "spinchain/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinchain {

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("TimeGrid: need at least two nodes");
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    if (!(nodes_[k + 1] > nodes_[k]) || !std::isfinite(nodes_[k + 1]))
      throw std::invalid_argument("TimeGrid: nodes must be finite and strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t intervals) {
  if (intervals == 0) throw std::invalid_argument("TimeGrid::uniform: zero intervals");
  if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid::uniform: horizon must be > 0");
  std::vector<double> nodes(intervals + 1);
  for (std::size_t j = 0; j <= intervals; ++j)
    nodes[j] = horizon * static_cast<double>(j) / static_cast<double>(intervals);
  nodes.back() = horizon;
  return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::refined(std::size_t factor) const {
  if (factor == 0) throw std::invalid_argument("TimeGrid::refined: zero factor");
  std::vector<double> nodes;
  nodes.reserve(intervals() * factor + 1);
  for (std::size_t j = 0; j < intervals(); ++j) {
    const double a = nodes_[j];
    const double b = nodes_[j + 1];
    nodes.push_back(a);
    for (std::size_t i = 1; i < factor; ++i)
      nodes.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(factor));
  }
  nodes.push_back(nodes_.back());
  return TimeGrid(std::move(nodes));
}

std::size_t TimeGrid::locate(double t) const noexcept {
  if (t <= nodes_.front()) return 0;
  if (t >= nodes_.back()) return intervals() - 1;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

std::vector<double> quadrature_weights(std::span<const double> nodes, QuadratureRule rule) {
  const std::size_t n = nodes.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  if (rule == QuadratureRule::Trapezoid) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double h = nodes[k + 1] - nodes[k];
      w[k] += 0.5 * h;
      w[k + 1] += 0.5 * h;
    }
    return w;
  }
  if ((n - 1) % 2 != 0)
    throw std::invalid_argument("quadrature_weights: Simpson needs an even number of intervals");
  for (std::size_t k = 0; k + 2 < n; k += 2) {
    const double h0 = nodes[k + 1] - nodes[k];
    const double h1 = nodes[k + 2] - nodes[k + 1];
    const double s = h0 + h1;
    w[k] += s / 6.0 * (2.0 - h1 / h0);
    w[k + 1] += s * s * s / (6.0 * h0 * h1);
    w[k + 2] += s / 6.0 * (2.0 - h0 / h1);
  }
  return w;
}

}  // namespace spinchain
