#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "spinchain/adjoint.hpp"
#include "spinchain/stochastic.hpp"

using namespace spinchain;
using std::numbers::pi;

namespace {

PConstControl random_pconst(const TimeGrid& grid, const ControlBox& box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> a = shelf_bounds(grid, box);
  for (double& v : a) v *= unit(rng);
  return PConstControl(grid, std::move(a));
}

void BM_Expm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RMatrix h = build_free_hamiltonian(n) + RMatrix::Identity(n, n) * 0.3;
  const CMatrix a = Complex(0, -0.7) * h.cast<Complex>();
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm)->Arg(3)->Arg(10)->Arg(50);

void BM_ExpmHermitian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RMatrix h = build_free_hamiltonian(n);
  for (auto _ : state) benchmark::DoNotOptimize(expm_hermitian(h, 0.7));
}
BENCHMARK(BM_ExpmHermitian)->Arg(3)->Arg(10)->Arg(50);

// One f3 evaluation at the full special-class scale.
void BM_PropagatePConst(benchmark::State& state) {
  const ChainModel m(3, pi);
  const ControlBox box = ControlBox::make(pi, 5.0, 3.0);
  const auto c = random_pconst(TimeGrid::uniform(pi, static_cast<std::size_t>(state.range(0))), box, 1);
  const CVector psi0 = basis_state(3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_pconst_final(m, c, psi0));
}
BENCHMARK(BM_PropagatePConst)->Arg(300)->Arg(1500);

void BM_PropagateContinuous(benchmark::State& state) {
  const ChainModel m(3, pi);
  const ControlBox box = ControlBox::make(pi, 5.0, 3.0);
  const TimeGrid g = TimeGrid::uniform(pi, 1000);
  const PLinearControl u = PLinearControl::sample(g, [&](double t) {
    const ControlPair b = box.bound(t);
    return ControlPair{0.5 * b[0] * std::sin(3 * t), 0.3 * b[1]};
  });
  const ShiftFunction sigma = ShiftFunction::linear(m);
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_continuous(m, u, sigma, basis_state(3, 0), g, tol));
}
BENCHMARK(BM_PropagateContinuous)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State& state) {
  const ChainModel m(3, pi);
  const ControlBox box = ControlBox::make(pi, 5.0, 3.0);
  const TimeGrid g = TimeGrid::uniform(pi, 1000);
  const PLinearControl u = PLinearControl::sample(g, [&](double t) { return ControlPair{0.4 * box.bound(t)[0], 0.0}; });
  const ProblemSpec spec = state.range(0) ? ProblemSpec::keeping(m, 1.0) : ProblemSpec::transfer(m);
  const ShiftFunction sigma = ShiftFunction::linear(m);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_gradient(m, u, sigma, spec, g));
}
BENCHMARK(BM_Gradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// One GA generation (48 offspring) on the desk-scale special-class objective.
void BM_GaGeneration(benchmark::State& state) {
  const ChainModel m(3, pi);
  const ControlBox box = ControlBox::make(pi, 5.0, 3.0);
  const TimeGrid g = TimeGrid::uniform(pi, 300);
  const ProblemSpec spec = ProblemSpec::transfer(m);
  const auto bounds = default_special_class_bounds(box);
  GaConfig c;
  c.generations = 2;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_special_class(m, spec, g, box, bounds, c));
}
BENCHMARK(BM_GaGeneration)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
