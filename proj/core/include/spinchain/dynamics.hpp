#pragma once

#include <span>
#include <vector>

#include "spinchain/controls.hpp"
#include "spinchain/expm.hpp"
#include "spinchain/grid.hpp"
#include "spinchain/model.hpp"
#include "spinchain/ode.hpp"
#include "spinchain/types.hpp"

namespace spinchain {

/// States psi(t_k) on a time grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<CVector> states;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  const CVector& final_state() const { return states.back(); }
};

/// Ordered per-interval step matrices exp(A(c_j) dt_j).
struct Propagator {
  std::vector<CMatrix> steps;
};

/// Full Hamiltonian H0 + H1(t, u(t)) with one-sided evaluation at control jumps.
class ControlledHamiltonian {
 public:
  ControlledHamiltonian(const ChainModel& model, const ControlSignal& control,
                        const ShiftFunction& sigma);

  /// Diagonal of H1 at t, looked up inside `segment`.
  RVector control_diag(double t, const Segment& segment) const;
  /// y' for the realified state y = (Re psi, Im psi): (H Im psi, -H Re psi).
  void realified_rhs(double t, const RVector& y, RVector& dy, const Segment& segment) const;
  /// psi' = -i H psi at t inside `segment`.
  CVector derivative(double t, const CVector& psi, const Segment& segment) const;

  /// Control breakpoints merged with the jumps of a piecewise-constant shift.
  std::vector<double> breakpoints() const;

  const ChainModel& model() const noexcept { return model_; }
  const ControlSignal& control() const noexcept { return control_; }
  const ShiftFunction& shift() const noexcept { return sigma_; }

 private:
  const ChainModel& model_;
  const ControlSignal& control_;
  const ShiftFunction& sigma_;
};

/// Realification helpers: y = (Re psi_1 .. Re psi_N, Im psi_1 .. Im psi_N).
RVector realify(const CVector& psi);
CVector complexify(const RVector& y);

/// Step matrices exp(-i (H0 + c_{1,j} diag((m-1-w mid_j - c_{2,j})^2)) dt_j).
Propagator build_propagator(const ChainModel& model, const PConstControl& control,
                            ExpmMethod method = ExpmMethod::Pade);

/// Exact chronological-product propagation for a piecewise-constant control with the
/// midpoint shift. Returns psi at every grid node.
Trajectory propagate_pconst(const ChainModel& model, const PConstControl& control,
                            const CVector& psi0, ExpmMethod method = ExpmMethod::Pade);

/// Terminal state only; same arithmetic as propagate_pconst.
CVector propagate_pconst_final(const ChainModel& model, const PConstControl& control,
                               const CVector& psi0, ExpmMethod method = ExpmMethod::Pade);

/// Adaptive Dormand-Prince integration of the realified system for any control class.
/// Reports psi on output_grid (which must span [0, T]).
Trajectory propagate_continuous(const ChainModel& model, const ControlSignal& control,
                                const ShiftFunction& sigma, const CVector& psi0,
                                const TimeGrid& output_grid, double tol = 1e-10,
                                OdeStats* stats = nullptr);

/// exp(-i H0 t) psi0.
CVector zero_control_state(const ChainModel& model, double t, const CVector& psi0);

/// Basis vector e_site (0-based).
CVector basis_state(int sites, int site);

/// Throws std::invalid_argument unless | ||psi|| - 1 | <= tol.
void require_unit_norm(const CVector& psi, double tol, const char* what);

/// Cubic Hermite interpolation of a trajectory using psi' = -i H psi at the nodes.
class StateInterpolant {
 public:
  StateInterpolant(const Trajectory& trajectory, const ControlledHamiltonian& hamiltonian);

  /// psi(t) inside the given integration segment.
  CVector operator()(double t, const Segment& segment) const;

 private:
  const Trajectory& trajectory_;
  // Derivatives at the left and right end of every interval (one-sided at jumps).
  std::vector<CVector> left_derivative_;
  std::vector<CVector> right_derivative_;
};

}  // namespace spinchain
