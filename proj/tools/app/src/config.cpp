#include "spinchain/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace spinchain::app {

using nlohmann::json;

namespace {

// A JSON object whose keys are consumed one by one; finish() rejects whatever is left.
class Section {
 public:
  Section(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return value_.contains(key); }

  const json& raw(const std::string& key) {
    if (!value_.contains(key)) throw ConfigError(where(key) + ": missing");
    used_.insert(key);
    return value_.at(key);
  }

  double real(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where(key) + ": must be finite");
    return x;
  }
  double real(const std::string& key, double fallback) { return has(key) ? real(key) : fallback; }

  std::uint64_t count(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw ConfigError(where(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, std::string fallback) {
    return has(key) ? text(key) : fallback;
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::vector<double> reals(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(where(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
      if (!std::isfinite(out.back())) throw ConfigError(where(key) + ": entries must be finite");
    }
    return out;
  }

  Section sub(const std::string& key) { return Section(raw(key), where(key)); }

  void finish() const {
    for (const auto& item : value_.items())
      if (!used_.count(item.key())) throw ConfigError(where(item.key()) + ": unknown key");
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> used_;
};

template <class E>
E choose(const std::string& where, const std::string& value,
         std::initializer_list<std::pair<const char*, E>> options) {
  std::string names;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    names += names.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(where + ": '" + value + "' is not one of " + names);
}

void expect_size(const std::string& where, std::size_t got, std::size_t want) {
  if (got != want)
    throw ConfigError(where + ": expected " + std::to_string(want) + " values, got " + std::to_string(got));
}

ControlPair pair_of(Section& s, const std::string& key, ControlPair fallback) {
  if (!s.has(key)) return fallback;
  const auto v = s.reals(key);
  expect_size(s.where(key), v.size(), 2);
  return {v[0], v[1]};
}

ChainModel parse_model(Section s) {
  const auto sites = s.count("sites");
  const double horizon = s.real("horizon");
  const double coupling = s.real("coupling", 1.0);
  s.finish();
  if (sites < 2 || sites > 4096) throw ConfigError("model.sites: must lie in [2, 4096]");
  if (!(horizon > 0)) throw ConfigError("model.horizon: must be positive");
  return ChainModel(static_cast<int>(sites), horizon, coupling);
}

ProblemSpec parse_problem(Section s, const ChainModel& model) {
  const auto kind = choose<ProblemKind>(s.where("kind"), s.text("kind"),
                                        {{"transfer", ProblemKind::Transfer}, {"keeping", ProblemKind::Keeping}});
  ProblemSpec spec = kind == ProblemKind::Transfer ? ProblemSpec::transfer(model)
                                                   : ProblemSpec::keeping(model, s.real("p_psi", 1.0));
  if (kind == ProblemKind::Transfer && s.has("p_psi"))
    throw ConfigError("problem.p_psi: only meaningful for the keeping problem");
  spec.p_u = pair_of(s, "p_u", {0.0, 0.0});
  spec.p_x = s.real("p_x", 0.0);
  spec.p_y = s.real("p_y", 0.0);
  const double sharpness = s.real("weight_sharpness", kDefaultWeightSharpness);
  spec.weights = {WeightFunction(sharpness, model.horizon()), WeightFunction(sharpness, model.horizon())};
  spec.quadrature = choose<QuadratureRule>(s.where("quadrature"), s.text("quadrature", "trapezoid"),
                                           {{"trapezoid", QuadratureRule::Trapezoid}, {"simpson", QuadratureRule::Simpson}});
  s.finish();
  if (spec.p_u[0] < 0 || spec.p_u[1] < 0 || spec.p_x < 0 || spec.p_y < 0 || spec.p_psi < 0)
    throw ConfigError("problem: penalty weights must be non-negative");
  return spec;
}

GpmConfig parse_gpm(Section& s) {
  GpmConfig c;
  c.variant = choose<GpmVariant>(s.where("variant"), s.text("variant", "1S"),
                                 {{"1S", GpmVariant::OneStep}, {"2S", GpmVariant::TwoStep}, {"3S", GpmVariant::ThreeStep}});
  c.alpha0 = s.real("alpha0", c.alpha0);
  c.backtrack = s.real("backtrack", c.backtrack);
  c.beta = s.real("beta", c.beta);
  c.gamma = s.real("gamma", c.gamma);
  c.max_iters = s.count("max_iters", c.max_iters);
  c.tol_obj = s.real("tol_obj", c.tol_obj);
  c.tol_res = s.real("tol_res", c.tol_res);
  c.max_halvings = s.count("max_halvings", c.max_halvings);
  return c;
}

GaSettings parse_ga(Section& s) {
  GaSettings g;
  g.target = choose<GaTarget>(s.where("target"), s.text("target", "special"),
                              {{"special", GaTarget::SpecialClass}, {"sine", GaTarget::SineBasis}});
  GaConfig& c = g.config;
  c.population = s.count("population", c.population);
  c.generations = s.count("generations", c.generations);
  c.mutation_rate = s.real("mutation_rate", c.mutation_rate);
  c.mutation_scale = s.real("mutation_scale", c.mutation_scale);
  c.crossover_rate = s.real("crossover_rate", c.crossover_rate);
  c.blend_alpha = s.real("blend_alpha", c.blend_alpha);
  c.tournament = s.count("tournament", c.tournament);
  c.elitism = s.count("elitism", c.elitism);
  c.seed = s.count("seed", c.seed);
  if (s.has("eval_budget")) c.eval_budget = s.count("eval_budget");
  c.threads = s.count("threads", c.threads);
  g.terms = s.count("terms", g.terms);
  g.max_frequency = s.real("max_frequency", g.max_frequency);
  if (g.terms < 1) throw ConfigError("optimizer.terms: must be >= 1");
  if (!(g.max_frequency >= 1)) throw ConfigError("optimizer.max_frequency: must be >= 1");
  return g;
}

OptimizerSettings parse_optimizer(Section s) {
  const std::string type = s.text("type");
  OptimizerSettings out;
  if (type == "gpm") {
    out = parse_gpm(s);
  } else if (type == "ga") {
    out = parse_ga(s);
  } else {
    throw ConfigError("optimizer.type: '" + type + "' is not one of gpm, ga");
  }
  s.finish();
  return out;
}

}  // namespace

RunConfig parse_config(const json& document) {
  try {
    Section root(document, "config");
    ChainModel model = parse_model(root.sub("model"));
    ProblemSpec problem = parse_problem(root.sub("problem"), model);
    const double T = model.horizon();

    Section c = root.sub("control");
    const std::string cls = c.text("class", "zero");
    const auto intervals = c.count("intervals", 1000);
    if (intervals < 1 || intervals > 10'000'000) throw ConfigError("control.intervals: must lie in [1, 1e7]");
    ControlPair amplitude{5.0, 3.0};
    int exponent = kDefaultEnvelopeExponent;
    if (c.has("bounds")) {
      Section b = c.sub("bounds");
      amplitude = pair_of(b, "amplitude", amplitude);
      exponent = static_cast<int>(b.count("exponent", static_cast<std::uint64_t>(exponent)));
      b.finish();
    }
    ControlBox box = ControlBox::make(T, amplitude[0], amplitude[1], exponent);
    TimeGrid grid = TimeGrid::uniform(T, intervals);
    const ShiftKind shift = choose<ShiftKind>(c.where("shift"), c.text("shift", "linear"),
                                              {{"linear", ShiftKind::Linear}, {"midpoint", ShiftKind::Midpoint}});
    const ShelfRule shelf = choose<ShelfRule>(c.where("shelf"), c.text("shelf", "midpoint"),
                                              {{"midpoint", ShelfRule::Midpoint}, {"interval-minimum", ShelfRule::IntervalMinimum}});

    ControlSignal control = ZeroControl{T};
    if (cls == "zero") {
    } else if (cls == "pconst") {
      std::vector<double> a(2 * intervals, 0.0);
      if (c.has("coefficients")) {
        a = c.reals("coefficients");
        expect_size(c.where("coefficients"), a.size(), 2 * intervals);
      }
      control = PConstControl(grid, std::move(a));
    } else if (cls == "plinear") {
      std::vector<double> first(intervals + 1, 0.0), second(intervals + 1, 0.0);
      if (c.has("first")) first = c.reals("first");
      if (c.has("second")) second = c.reals("second");
      expect_size(c.where("first"), first.size(), intervals + 1);
      expect_size(c.where("second"), second.size(), intervals + 1);
      control = PLinearControl(grid, std::move(first), std::move(second));
    } else if (cls == "special") {
      std::vector<double> x(SpecialClassControl::kParameters, 0.0);
      if (c.has("parameters")) x = c.reals("parameters");
      else {
        // All-zero amplitudes with the switching times at the centres of their windows.
        x[SpecialClassControl::kT1] = 0.1 * T;
        x[SpecialClassControl::kT2] = 0.2 * T;
        x[SpecialClassControl::kT3] = 0.8 * T;
        x[SpecialClassControl::kT4] = 0.9 * T;
      }
      expect_size(c.where("parameters"), x.size(), SpecialClassControl::kParameters);
      control = SpecialClassControl(x, box);
    } else if (cls == "sine") {
      if (!c.has("parameters")) throw ConfigError("control.parameters: required for the sine class");
      const auto y = c.reals("parameters");
      if (y.empty() || y.size() % 4 != 0) throw ConfigError("control.parameters: sine class needs 4K values");
      control = SineBasisControl(y, box);
    } else {
      throw ConfigError("control.class: '" + cls + "' is not one of zero, pconst, plinear, special, sine");
    }
    c.finish();

    SolverSettings solver;
    if (root.has("solver")) {
      Section s = root.sub("solver");
      solver.method = choose<SolverMethod>(s.where("method"), s.text("method", "expm"),
                                           {{"expm", SolverMethod::Expm}, {"rk", SolverMethod::RungeKutta}});
      solver.tolerance = s.real("tolerance", solver.tolerance);
      solver.output_intervals = s.count("output_intervals", solver.output_intervals);
      s.finish();
      if (!(solver.tolerance > 0 && solver.tolerance < 1)) throw ConfigError("solver.tolerance: must lie in (0, 1)");
      if (solver.output_intervals < 1) throw ConfigError("solver.output_intervals: must be >= 1");
    }

    std::optional<OptimizerSettings> optimizer;
    if (root.has("optimizer")) optimizer = parse_optimizer(root.sub("optimizer"));
    if (optimizer) {
      if (auto* gpm = std::get_if<GpmConfig>(&*optimizer)) {
        gpm->ode_tol = solver.tolerance;
        gpm->validate();
      } else {
        std::get<GaSettings>(*optimizer).config.validate();
      }
    }

    OutputSettings output;
    if (root.has("output")) {
      Section o = root.sub("output");
      output.directory = o.text("directory", output.directory.string());
      output.trajectory = o.flag("trajectory", output.trajectory);
      output.infidelity = o.flag("infidelity", output.infidelity);
      o.finish();
    }
    root.finish();

    problem.validate(model.sites());
    return RunConfig{std::move(model), std::move(problem), std::move(box), std::move(grid), std::move(control),
                     shift, shelf, solver, std::move(optimizer), std::move(output)};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // Constructors of the core types validate their own arguments.
    throw ConfigError(e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(document);
}

json control_to_json(const ControlSignal& control, const ControlBox& box, std::size_t intervals) {
  json out;
  out["intervals"] = intervals;
  out["bounds"] = {{"amplitude", {box.channels[0].amplitude(), box.channels[1].amplitude()}},
                   {"exponent", box.channels[0].exponent()}};
  std::visit(
      [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, ZeroControl>) {
          out["class"] = "zero";
        } else if constexpr (std::is_same_v<C, PConstControl>) {
          out["class"] = "pconst";
          out["intervals"] = c.intervals();
          out["coefficients"] = std::vector<double>(c.coefficients().begin(), c.coefficients().end());
        } else if constexpr (std::is_same_v<C, PLinearControl>) {
          out["class"] = "plinear";
          out["intervals"] = c.grid().intervals();
          out["first"] = std::vector<double>(c.nodes(0).begin(), c.nodes(0).end());
          out["second"] = std::vector<double>(c.nodes(1).begin(), c.nodes(1).end());
        } else {
          out["class"] = std::is_same_v<C, SpecialClassControl> ? "special" : "sine";
          out["parameters"] = std::vector<double>(c.parameters().begin(), c.parameters().end());
        }
      },
      control);
  return out;
}

}  // namespace spinchain::app
