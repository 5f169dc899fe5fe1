#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "spinchain/types.hpp"

namespace spinchain {

// Callers that accept a single accuracy `tol` control local steps at this
// fraction of it, so the accumulated error over a horizon stays near tol.
inline constexpr double kLocalToleranceFactor = 0.1;

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_steps = 20'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

/// Interval between two consecutive breakpoints, ordered lo < hi irrespective of the
/// integration direction. Right-hand sides use it to pick one-sided values at jumps.
struct Segment {
  double lo;
  double hi;
  /// t itself, except that the upper end maps to the largest double below it so that
  /// left-closed piecewise lookups resolve into this segment.
  double lookup(double t) const noexcept {
    if (t >= hi) return std::nextafter(hi, lo);
    return t < lo ? lo : t;
  }
};

/// Dormand-Prince 5(4) integration of y' = f(t, y, segment) from t0 to t1 (either
/// direction). Steps land exactly on every output time and every breakpoint; the stage
/// derivative is re-evaluated after each breakpoint. `on_output(i, y)` is called for each
/// output time outputs[i], which must be ordered along the integration direction.
template <class Rhs, class Output>
OdeStats integrate_dopri5(Rhs&& rhs, double t0, double t1, RVector y,
                          std::span<const double> outputs, std::span<const double> breaks,
                          const OdeOptions& options, Output&& on_output) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeStats stats;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double h_min = 1e-14 * std::max(span, 1e-300);

  auto ahead = [&](double a, double b) { return dir * (b - a) > 0.0; };

  // Segment ends strictly between t0 and t1, ordered along the direction.
  std::vector<double> ends;
  for (double b : breaks)
    if (ahead(t0, b) && ahead(b, t1)) ends.push_back(b);
  std::sort(ends.begin(), ends.end(), [&](double a, double b) { return dir * (b - a) > 0.0; });
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  ends.push_back(t1);

  std::size_t next_out = 0;
  auto emit_upto = [&](double t, const RVector& state) {
    while (next_out < outputs.size() && !ahead(t, outputs[next_out])) {
      on_output(next_out, state);
      ++next_out;
    }
  };
  emit_upto(t0, y);

  const Eigen::Index n = y.size();
  RVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

  double t = t0;
  double h = 0.0;
  for (double seg_end : ends) {
    const Segment seg{std::min(t, seg_end), std::max(t, seg_end)};
    rhs(t, y, k1, seg);
    ++stats.rhs_evals;

    if (h == 0.0) {
      // Hairer's starting-step heuristic.
      const RVector sc = (options.abs_tol + options.rel_tol * y.array().abs()).matrix();
      const double d0 = std::sqrt((y.array() / sc.array()).square().mean());
      const double d1 = std::sqrt((k1.array() / sc.array()).square().mean());
      double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
      h0 = std::min(h0, std::abs(seg_end - t));
      ytmp = y + dir * h0 * k1;
      rhs(t + dir * h0, ytmp, k2, seg);
      ++stats.rhs_evals;
      const double d2 = std::sqrt(((k2 - k1).array() / sc.array()).square().mean()) / h0;
      const double h1 = std::max(d1, d2) <= 1e-15
                            ? std::max(1e-6, h0 * 1e-3)
                            : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
      h = std::min(100.0 * h0, h1);
    }

    while (ahead(t, seg_end)) {
      if (stats.accepted + stats.rejected >= options.max_steps)
        throw SolverError("dopri5: step budget exhausted at t=" + std::to_string(t));

      // Clip to the next stop (output time or segment end).
      double stop = seg_end;
      if (next_out < outputs.size() && ahead(t, outputs[next_out]) &&
          !ahead(seg_end, outputs[next_out]))
        stop = outputs[next_out];
      const double remaining = std::abs(stop - t);
      bool clipped = false;
      double step = h;
      if (step >= remaining * (1.0 - 1e-12)) {
        step = remaining;
        clipped = true;
      }
      if (step < h_min)
        throw SolverError("dopri5: step size underflow at t=" + std::to_string(t));

      const double hs = dir * step;
      ytmp = y + hs * a21 * k1;
      rhs(t + c2 * hs, ytmp, k2, seg);
      ytmp = y + hs * (a31 * k1 + a32 * k2);
      rhs(t + c3 * hs, ytmp, k3, seg);
      ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * hs, ytmp, k4, seg);
      ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * hs, ytmp, k5, seg);
      ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      const double t_new = clipped ? stop : t + hs;
      rhs(t_new, ytmp, k6, seg);
      ynew = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      rhs(t_new, ynew, k7, seg);
      stats.rhs_evals += 6;

      err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const RVector sc =
          (options.abs_tol + options.rel_tol * y.array().abs().max(ynew.array().abs())).matrix();
      const double en = std::sqrt((err.array() / sc.array()).square().mean());

      if (en <= 1.0 && std::isfinite(en)) {
        ++stats.accepted;
        t = t_new;
        y.swap(ynew);
        k1.swap(k7);
        emit_upto(t, y);
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        const double proposed = step * fac;
        h = clipped ? std::max(proposed, h) : proposed;
      } else {
        ++stats.rejected;
        const double fac = std::isfinite(en) ? std::clamp(0.9 * std::pow(en, -0.2), 0.1, 1.0) : 0.1;
        h = step * fac;
      }
    }
    t = seg_end;
  }
  emit_upto(t, y);
  return stats;
}

}  // namespace spinchain
