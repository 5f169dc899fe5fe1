#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "spinchain/controls.hpp"
#include "spinchain/types.hpp"

namespace spinchain::testing {

using std::numbers::pi;

/// Zero-control transfer infidelity for N = 3.
inline double transfer_curve(double t) {
  return (6 * std::cos(t) + 3 * std::cos(2 * t) - 2 * std::cos(3 * t) + 11) / 18;
}

/// Zero-control keeping infidelity for N = 3.
inline double keeping_curve(double t) {
  const double s = std::sin(t / 2);
  return 2.0 / 9.0 * (7 * std::cos(t) + 2 * std::cos(2 * t) + 9) * s * s;
}

inline CVector random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v / v.norm();
}

/// Coefficients drawn uniformly inside the shelf bounds.
inline PConstControl random_pconst(const TimeGrid& grid, const ControlBox& box, std::mt19937_64& rng,
                                   double fill = 1.0) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> a = shelf_bounds(grid, box);
  for (double& v : a) v *= fill * unit(rng);
  return PConstControl(grid, std::move(a));
}

/// Node values drawn uniformly inside the box.
inline PLinearControl random_plinear(const TimeGrid& grid, const ControlBox& box, std::mt19937_64& rng,
                                     double fill = 1.0) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  return PLinearControl::sample(grid, [&](double t) {
    const ControlPair b = box.bound(t);
    return ControlPair{fill * b[0] * unit(rng), fill * b[1] * unit(rng)};
  });
}

}  // namespace spinchain::testing
