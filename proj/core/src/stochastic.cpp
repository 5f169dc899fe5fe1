#include "spinchain/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace spinchain {

void GaConfig::validate() const {
  if (population < 4) throw std::invalid_argument("GaConfig: population must be >= 4");
  if (generations < 1) throw std::invalid_argument("GaConfig: generations must be >= 1");
  if (!(mutation_rate > 0.0 && mutation_rate < 1.0))
    throw std::invalid_argument("GaConfig: mutation_rate must lie in (0, 1)");
  if (!(crossover_rate > 0.0 && crossover_rate < 1.0))
    throw std::invalid_argument("GaConfig: crossover_rate must lie in (0, 1)");
  if (!(mutation_scale > 0.0)) throw std::invalid_argument("GaConfig: mutation_scale must be > 0");
  if (!(blend_alpha >= 0.0)) throw std::invalid_argument("GaConfig: blend_alpha must be >= 0");
  if (tournament < 1) throw std::invalid_argument("GaConfig: tournament must be >= 1");
  if (elitism >= population) throw std::invalid_argument("GaConfig: elitism must be < population");
  if (eval_budget && *eval_budget < 1) throw std::invalid_argument("GaConfig: eval_budget must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Individual {
  std::vector<double> genes;
  double fitness = kInf;
};

double safe_eval(const Objective& objective, std::span<const double> x) {
  const double v = objective(x);
  return std::isfinite(v) ? v : kInf;
}

void evaluate_all(const Objective& objective, std::vector<Individual>& batch, std::size_t threads) {
  const std::size_t n = batch.size();
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), n);
  if (workers <= 1) {
    for (auto& ind : batch) ind.fitness = safe_eval(objective, ind.genes);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) batch[i].fitness = safe_eval(objective, batch[i].genes);
    });
  }
}

// Best first; ties keep their original order so ranking is reproducible.
void rank(std::vector<Individual>& pop) {
  std::stable_sort(pop.begin(), pop.end(),
                   [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
}

GenerationStats stats_of(std::size_t gen, const std::vector<Individual>& pop, double best_so_far,
                         std::size_t evals) {
  double sum = 0.0;
  std::size_t finite = 0;
  for (const auto& ind : pop)
    if (std::isfinite(ind.fitness)) {
      sum += ind.fitness;
      ++finite;
    }
  return {gen, best_so_far, finite ? sum / static_cast<double>(finite) : kInf, evals};
}

}  // namespace

SearchResult ga_minimize(const Objective& objective, std::span<const Interval> bounds,
                         const GaConfig& config, const Repair& repair) {
  config.validate();
  if (bounds.empty()) throw std::invalid_argument("ga_minimize: empty bounds");
  for (const auto& b : bounds)
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
      throw std::invalid_argument("ga_minimize: bounds must be finite with lo <= hi");

  const std::size_t dim = bounds.size();
  const bool singleton = std::all_of(bounds.begin(), bounds.end(), [](const Interval& b) { return b.lo == b.hi; });
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t budget = config.eval_budget.value_or(std::numeric_limits<std::size_t>::max());

  auto finish = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < dim; ++i) x[i] = bounds[i].clamp(x[i]);
    if (repair) repair(x);
  };

  SearchResult result;
  Individual best;

  // Generation 1: uniform initialization.
  const std::size_t first = std::min(config.population, budget);
  std::vector<Individual> pop(first);
  for (auto& ind : pop) {
    ind.genes.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) ind.genes[i] = bounds[i].lo + (bounds[i].hi - bounds[i].lo) * unit(rng);
    finish(ind.genes);
  }
  evaluate_all(objective, pop, config.threads);
  result.eval_count = pop.size();
  rank(pop);
  best = pop.front();
  result.history.push_back(stats_of(1, pop, best.fitness, result.eval_count));

  auto tournament = [&](const std::vector<Individual>& from) -> const Individual& {
    std::uniform_int_distribution<std::size_t> pick(0, from.size() - 1);
    std::size_t winner = pick(rng);
    for (std::size_t i = 1; i < config.tournament; ++i) {
      const std::size_t c = pick(rng);
      if (from[c].fitness < from[winner].fitness || (from[c].fitness == from[winner].fitness && c < winner))
        winner = c;
    }
    return from[winner];
  };

  for (std::size_t gen = 2; gen <= config.generations && !singleton; ++gen) {
    const std::size_t elites = std::min(config.elitism, pop.size());
    const std::size_t wanted = config.population - elites;
    const std::size_t remaining = budget - result.eval_count;
    const std::size_t count = std::min(wanted, remaining);
    if (count == 0) break;

    std::vector<Individual> children;
    children.reserve(count + 1);
    while (children.size() < count) {
      const Individual& pa = tournament(pop);
      const Individual& pb = tournament(pop);
      std::vector<double> ca = pa.genes, cb = pb.genes;
      if (unit(rng) < config.crossover_rate) {
        for (std::size_t i = 0; i < dim; ++i) {
          const double lo = std::min(pa.genes[i], pb.genes[i]);
          const double hi = std::max(pa.genes[i], pb.genes[i]);
          const double ext = config.blend_alpha * (hi - lo);
          ca[i] = lo - ext + (hi - lo + 2 * ext) * unit(rng);
          cb[i] = lo - ext + (hi - lo + 2 * ext) * unit(rng);
        }
      }
      for (auto* c : {&ca, &cb}) {
        for (std::size_t i = 0; i < dim; ++i) {
          if (unit(rng) < config.mutation_rate) {
            std::normal_distribution<double> gauss(0.0, config.mutation_scale * (bounds[i].hi - bounds[i].lo));
            (*c)[i] += gauss(rng);
          }
        }
        finish(*c);
      }
      children.push_back({std::move(ca), kInf});
      if (children.size() < count) children.push_back({std::move(cb), kInf});
    }
    evaluate_all(objective, children, config.threads);
    result.eval_count += children.size();

    std::vector<Individual> next(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(elites));
    for (auto& c : children) next.push_back(std::move(c));
    // A budget-truncated generation keeps the best survivors of the previous one.
    for (std::size_t i = elites; next.size() < config.population && i < pop.size(); ++i) next.push_back(pop[i]);
    pop = std::move(next);
    rank(pop);
    if (pop.front().fitness < best.fitness) best = pop.front();
    result.history.push_back(stats_of(gen, pop, best.fitness, result.eval_count));
  }

  result.best_params = best.genes;
  result.best_value = best.fitness;
  return result;
}

SpecialClassResult optimize_special_class(const ChainModel& model, const ProblemSpec& spec,
                                          const TimeGrid& grid, const ControlBox& box,
                                          std::span<const Interval> bounds, const GaConfig& config) {
  if (bounds.size() != SpecialClassControl::kParameters)
    throw std::invalid_argument("optimize_special_class: need 10 bounds");
  if (spec.kind != ProblemKind::Transfer)
    throw std::invalid_argument("optimize_special_class: f3 is a transfer objective");
  spec.validate(model.sites());
  const Objective f = [&](std::span<const double> x) { return objective_f3(x, model, spec, grid, box); };
  SearchResult search = ga_minimize(f, bounds, config, [](std::span<double> x) { repair_switching_times(x); });
  SpecialClassControl control(search.best_params, box);
  PConstControl discretized = discretize_pconst(control, grid, box);
  return {std::move(search), std::move(control), std::move(discretized)};
}

SineBasisResult optimize_sine_basis(const ChainModel& model, const ProblemSpec& spec,
                                    const TimeGrid& grid, const ControlBox& box,
                                    std::span<const Interval> bounds, const GaConfig& config) {
  if (bounds.empty() || bounds.size() % 4 != 0)
    throw std::invalid_argument("optimize_sine_basis: need 4 K bounds");
  spec.validate(model.sites());
  const Objective f = [&](std::span<const double> y) { return objective_f4(y, model, spec, grid, box); };
  SearchResult search = ga_minimize(f, bounds, config);
  SineBasisControl control(search.best_params, box);
  PConstControl discretized = discretize_pconst(control, grid, box);
  return {std::move(search), std::move(control), std::move(discretized)};
}

}  // namespace spinchain
