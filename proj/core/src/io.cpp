#include "spinchain/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

#include "spinchain/objectives.hpp"

namespace spinchain {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, const CVector& psig) {
  if (trajectory.empty()) throw std::invalid_argument("write_trajectory_csv: empty trajectory");
  const auto n = trajectory.states.front().size();
  out << "k,t";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",re_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) out << ",im_" << i;
  out << ",norm,infidelity\n";
  for (std::size_t j = 0; j < trajectory.size(); ++j) {
    const CVector& psi = trajectory.states[j];
    out << j << ',' << format_real(trajectory.times[j]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_real(psi[i].real());
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_real(psi[i].imag());
    out << ',' << format_real(psi.norm()) << ',' << format_real(infidelity(psi, psig)) << '\n';
  }
}

void write_infidelity_csv(std::ostream& out, const Trajectory& trajectory, const CVector& psig) {
  out << "t,infidelity\n";
  for (std::size_t j = 0; j < trajectory.size(); ++j)
    out << format_real(trajectory.times[j]) << ',' << format_real(infidelity(trajectory.states[j], psig)) << '\n';
}

void write_gradient_csv(std::ostream& out, const GradientSignal& grad) {
  out << "t,g1,g2\n";
  for (std::size_t j = 0; j < grad.times.size(); ++j)
    out << format_real(grad.times[j]) << ',' << format_real(grad.values[j][0]) << ','
        << format_real(grad.values[j][1]) << '\n';
}

void write_history_csv(std::ostream& out, const OptimizerRun& run) {
  out << "iter,objective,residual,alpha,forward_solves\n";
  for (std::size_t k = 0; k < run.objective_history.size(); ++k) {
    out << k << ',' << format_real(run.objective_history[k]) << ',';
    if (k < run.residual_history.size()) out << format_real(run.residual_history[k]);
    out << ',' << format_real(run.alpha_history[k]) << ',' << run.forward_solves[k] << '\n';
  }
}

void write_generation_jsonl(std::ostream& out, std::span<const GenerationStats> history) {
  // Non-finite values have no JSON literal; they are written as null.
  auto num = [](double v) { return std::isfinite(v) ? format_real(v) : std::string("null"); };
  for (const auto& g : history)
    out << "{\"gen\":" << g.generation << ",\"best\":" << num(g.best) << ",\"mean\":" << num(g.mean)
        << ",\"evals\":" << g.evals << "}\n";
}

void write_control_csv(std::ostream& out, const ControlSignal& control, std::span<const double> times) {
  out << "t,u1,u2\n";
  for (double t : times) {
    const ControlPair u = evaluate(control, t);
    out << format_real(t) << ',' << format_real(u[0]) << ',' << format_real(u[1]) << '\n';
  }
}

}  // namespace spinchain
