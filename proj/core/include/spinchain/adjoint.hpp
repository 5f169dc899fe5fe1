#pragma once

#include <vector>

#include "spinchain/controls.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/objectives.hpp"

namespace spinchain {

/// Costate eta(t_k) on the forward grid.
struct AdjointTrajectory {
  std::vector<double> times;
  std::vector<CVector> costates;
};

/// Gradient values (dPhi/du1, dPhi/du2) on a grid.
struct GradientSignal {
  std::vector<double> times;
  std::vector<ControlPair> values;
};

/// Final costate <psig, psiT> psig with <a, b> = a^H b.
CVector transversality(const CVector& psi_final, const CVector& psig);

/// Integrates eta' = -i H eta - P_psi <psig, psi> psig backward from the transversality
/// vector (the source term is present for the keeping problem only). The forward state is
/// interpolated between trajectory nodes by cubic Hermite interpolation.
AdjointTrajectory solve_adjoint(const ChainModel& model, const ControlSignal& control,
                                const ShiftFunction& sigma, const Trajectory& psi,
                                const ProblemSpec& spec, double tol = 1e-10);

/// Transfer problem with a piecewise-constant control: eta(t_{j-1}) = U_j^H eta(t_j) using the
/// same step matrices as propagate_pconst.
AdjointTrajectory solve_adjoint_pconst(const ChainModel& model, const PConstControl& control,
                                       const Trajectory& psi, const ProblemSpec& spec,
                                       ExpmMethod method = ExpmMethod::Pade);

/// g_l(t) = -2 Im <eta(t), dH1/du_l psi(t)> + 2 P_{u_l} S_l(t) u_l(t) at every node, with
/// dH1/du1 = diag((m-1-sigma-u2)^2) and dH1/du2 = -2 diag(u1 (m-1-sigma-u2)).
GradientSignal gradient(const ChainModel& model, const ControlSignal& control,
                        const ShiftFunction& sigma, const Trajectory& psi,
                        const AdjointTrajectory& eta, const ProblemSpec& spec);

/// <grad, v>_{L2([0,T], R^2)} on the gradient grid.
double l2_inner(const GradientSignal& grad, const ControlSignal& direction,
                QuadratureRule rule = QuadratureRule::Trapezoid);

/// L2 norm of u - Pr_{Q_u(t)}(u - alpha grad) on the gradient grid.
double pmp_residual(const ControlSignal& control, const GradientSignal& grad, double alpha,
                    const ControlBox& box, QuadratureRule rule = QuadratureRule::Trapezoid);

/// Forward solve, adjoint solve and gradient for one control.
struct GradientEvaluation {
  Trajectory psi;
  AdjointTrajectory eta;
  GradientSignal grad;
  double objective;
};
GradientEvaluation evaluate_gradient(const ChainModel& model, const ControlSignal& control,
                                     const ShiftFunction& sigma, const ProblemSpec& spec,
                                     const TimeGrid& grid, double tol = 1e-10);

}  // namespace spinchain
