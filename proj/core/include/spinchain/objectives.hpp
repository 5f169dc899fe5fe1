#pragma once

#include <array>
#include <span>

#include "spinchain/controls.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/grid.hpp"
#include "spinchain/model.hpp"
#include "spinchain/types.hpp"

namespace spinchain {

enum class ProblemKind { Transfer, Keeping };

/// Objective configuration shared by the transfer (I1) and keeping (I2) problems.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::Transfer;
  CVector psi0;
  CVector psig;
  double p_psi = 0.0;               ///< weight of the keeping integral
  ControlPair p_u{0.0, 0.0};        ///< control-energy weights P_{u_1}, P_{u_2}
  double p_x = 0.0;                 ///< sample penalty for the special class
  double p_y = 0.0;                 ///< sample penalty for the sine basis
  std::array<WeightFunction, 2> weights;
  QuadratureRule quadrature = QuadratureRule::Trapezoid;

  /// psi0 = e_1, psig = e_N.
  static ProblemSpec transfer(const ChainModel& model);
  /// psi0 = psig = e_N.
  static ProblemSpec keeping(const ChainModel& model, double p_psi);

  /// Throws std::invalid_argument on inconsistent settings.
  void validate(int sites) const;
};

/// F(psi; psig) = 1 - |<psig, psi>|^2. Both inputs must be unit vectors within 1e-8.
double infidelity(const CVector& psi, const CVector& psig);

/// Transfer: terminal infidelity. Keeping: terminal infidelity + P_psi * integral of F.
double objective_I(const Trajectory& trajectory, const ProblemSpec& spec);

/// Integral of sum_l P_{u_l} S_l(t) u_l(t)^2 on the given nodes.
double control_penalty(const ControlSignal& control, std::span<const double> nodes,
                       const ProblemSpec& spec);

/// I_p plus the weighted control energy, integrated on the trajectory grid.
double objective_Phi(const Trajectory& trajectory, const ControlSignal& control,
                     const ProblemSpec& spec);

/// sum_{j=0}^{M-1} sum_l |a_{l,j}|.
double sample_l1(const PConstControl& control);

/// Special-class objective: the PConst version of u(.; x) on `grid` propagated exactly,
/// terminal infidelity plus P_x times the absolute sample sum.
double objective_f3(std::span<const double> x, const ChainModel& model, const ProblemSpec& spec,
                    const TimeGrid& grid, const ControlBox& box,
                    ShelfRule rule = ShelfRule::Midpoint);

/// Sine-basis keeping objective: max over nodes t_1..t_M of F plus P_y times the sample sum.
double objective_f4(std::span<const double> y, const ChainModel& model, const ProblemSpec& spec,
                    const TimeGrid& grid, const ControlBox& box,
                    ShelfRule rule = ShelfRule::Midpoint);

}  // namespace spinchain
