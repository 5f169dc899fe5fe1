#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "spinchain/controls.hpp"
#include "spinchain/model.hpp"
#include "spinchain/objectives.hpp"

namespace spinchain {

struct GaConfig {
  std::size_t population = 50;
  std::size_t generations = 200;   ///< the initial population counts as generation 1
  double mutation_rate = 0.15;     ///< per-coordinate mutation probability
  double mutation_scale = 0.1;     ///< Gaussian sigma as a fraction of the coordinate range
  double crossover_rate = 0.9;
  double blend_alpha = 0.5;        ///< BLX-alpha extension
  std::size_t tournament = 3;
  std::size_t elitism = 2;
  std::uint64_t seed = 1;
  std::optional<std::size_t> eval_budget;
  std::size_t threads = 1;

  void validate() const;
};

struct GenerationStats {
  std::size_t generation;
  double best;
  double mean;  ///< over finite fitness values
  std::size_t evals;
};

struct SearchResult {
  std::vector<double> best_params;
  double best_value = 0.0;
  std::size_t eval_count = 0;
  std::vector<GenerationStats> history;
};

using Objective = std::function<double(std::span<const double>)>;
/// In-place feasibility repair applied to every candidate before evaluation.
using Repair = std::function<void(std::span<double>)>;

/// Real-coded GA: uniform initialization, tournament selection, blend crossover, clipped
/// Gaussian mutation and elitism. Non-finite objective values count as +infinity.
/// Deterministic for a given seed regardless of `threads`.
SearchResult ga_minimize(const Objective& objective, std::span<const Interval> bounds,
                         const GaConfig& config, const Repair& repair = {});

struct SpecialClassResult {
  SearchResult search;
  SpecialClassControl control;
  PConstControl discretized;
};

/// Minimizes f3 over Q_x.
SpecialClassResult optimize_special_class(const ChainModel& model, const ProblemSpec& spec,
                                          const TimeGrid& grid, const ControlBox& box,
                                          std::span<const Interval> bounds,
                                          const GaConfig& config);

struct SineBasisResult {
  SearchResult search;
  SineBasisControl control;
  PConstControl discretized;
};

/// Minimizes f4 over Q_y.
SineBasisResult optimize_sine_basis(const ChainModel& model, const ProblemSpec& spec,
                                    const TimeGrid& grid, const ControlBox& box,
                                    std::span<const Interval> bounds, const GaConfig& config);

}  // namespace spinchain
