#pragma once

#include <ostream>
#include <span>
#include <string>

#include "spinchain/adjoint.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/gpm.hpp"
#include "spinchain/stochastic.hpp"

namespace spinchain {

/// Shortest round-trip decimal representation ('.' separator, locale independent).
std::string format_real(double value);

/// k, t, re_1..re_N, im_1..im_N, norm, infidelity
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, const CVector& psig);
/// t, infidelity
void write_infidelity_csv(std::ostream& out, const Trajectory& trajectory, const CVector& psig);
/// t, g1, g2
void write_gradient_csv(std::ostream& out, const GradientSignal& grad);
/// iter, objective, residual, alpha, forward_solves
void write_history_csv(std::ostream& out, const OptimizerRun& run);
/// One {"gen","best","mean","evals"} object per line.
void write_generation_jsonl(std::ostream& out, std::span<const GenerationStats> history);
/// t, u1, u2
void write_control_csv(std::ostream& out, const ControlSignal& control,
                       std::span<const double> times);

}  // namespace spinchain
