#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "json.hpp"

#include "spinchain/controls.hpp"
#include "spinchain/gpm.hpp"
#include "spinchain/model.hpp"
#include "spinchain/objectives.hpp"
#include "spinchain/stochastic.hpp"

namespace spinchain::app {

/// Invalid or inconsistent run configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolverMethod { Expm, RungeKutta };
enum class ShiftKind { Linear, Midpoint };

struct SolverSettings {
  SolverMethod method = SolverMethod::Expm;
  double tolerance = 1e-10;
  std::size_t output_intervals = 1000;
};

enum class GaTarget { SpecialClass, SineBasis };

struct GaSettings {
  GaTarget target = GaTarget::SpecialClass;
  GaConfig config;
  std::size_t terms = 3;         ///< sine-basis terms per channel
  double max_frequency = 10.0;   ///< upper bound on omega
};

using OptimizerSettings = std::variant<GpmConfig, GaSettings>;

struct OutputSettings {
  std::filesystem::path directory = "spinchain-out";
  bool trajectory = true;
  bool infidelity = true;
};

/// Fully resolved run description.
struct RunConfig {
  ChainModel model;
  ProblemSpec problem;
  ControlBox box;
  TimeGrid grid;            ///< control grid
  ControlSignal control;
  ShiftKind shift = ShiftKind::Linear;
  ShelfRule shelf = ShelfRule::Midpoint;
  SolverSettings solver;
  std::optional<OptimizerSettings> optimizer;
  OutputSettings output;
};

/// Strict parse: unknown keys, wrong types and out-of-range values raise ConfigError.
RunConfig parse_config(const nlohmann::json& document);
RunConfig load_config(const std::filesystem::path& path);

/// The "control" section that reproduces `control` (uniform grids only).
nlohmann::json control_to_json(const ControlSignal& control, const ControlBox& box,
                               std::size_t intervals);

}  // namespace spinchain::app
