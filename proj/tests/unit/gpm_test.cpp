#include <gtest/gtest.h>

#include "spinchain/gpm.hpp"
#include "support.hpp"

using namespace spinchain;
using namespace spinchain::testing;

namespace {

GradientSignal constant_gradient(const TimeGrid& g, ControlPair v) {
  return {{g.nodes().begin(), g.nodes().end()}, std::vector<ControlPair>(g.size(), v)};
}

GpmConfig config(GpmVariant v, double beta = 0.0, double gamma = 0.0) {
  GpmConfig c;
  c.variant = v;
  c.beta = beta;
  c.gamma = gamma;
  c.max_iters = 25;
  c.tol_obj = 0.0;
  c.tol_res = 0.0;
  return c;
}

void expect_monotone(const OptimizerRun& run) {
  for (std::size_t k = 1; k < run.objective_history.size(); ++k)
    EXPECT_LE(run.objective_history[k], run.objective_history[k - 1]) << "iteration " << k;
}

}  // namespace

TEST(GpmConfig, Validation) {
  GpmConfig c;
  EXPECT_NO_THROW(c.validate());
  c.beta = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = GpmConfig{};
  c.backtrack = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = GpmConfig{};
  c.alpha0 = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(GpmStep, FixedPointWithZeroGradient) {
  const double T = 1.0;
  const ControlBox box = ControlBox::make(T, 1.0, 1.0);
  const TimeGrid g = TimeGrid::uniform(T, 12);
  std::mt19937_64 rng(3);
  const auto u = random_plinear(g, box, rng, 0.8);
  const auto next = gpm_step(u, nullptr, nullptr, constant_gradient(g, {0.0, 0.0}), GpmVariant::OneStep, 0.7, 0.0,
                             0.0, box);
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(next.nodes(l)[k], u.nodes(l)[k]);
}

TEST(GpmStep, ThreeStepWithoutMomentumIsOneStep) {
  const double T = 1.0;
  const ControlBox box = ControlBox::make(T, 1.0, 1.0);
  const TimeGrid g = TimeGrid::uniform(T, 12);
  std::mt19937_64 rng(4);
  const auto u = random_plinear(g, box, rng), u1 = random_plinear(g, box, rng), u2 = random_plinear(g, box, rng);
  const auto grad = constant_gradient(g, {0.3, -0.7});
  const auto a = gpm_step(u, nullptr, nullptr, grad, GpmVariant::OneStep, 0.2, 0.0, 0.0, box);
  const auto b = gpm_step(u, &u1, &u2, grad, GpmVariant::ThreeStep, 0.2, 0.0, 0.0, box);
  const auto c = gpm_step(u, &u1, nullptr, grad, GpmVariant::TwoStep, 0.2, 0.0, 0.0, box);
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_EQ(a.nodes(l)[k], b.nodes(l)[k]);
      EXPECT_EQ(a.nodes(l)[k], c.nodes(l)[k]);
    }
}

TEST(GpmStep, MomentumFormula) {
  const double T = 1.0;
  const ControlBox box = ControlBox::make(T, 10.0, 10.0);
  const TimeGrid g = TimeGrid::uniform(T, 2);
  const PLinearControl u(g, {0.0, 1.0, 0.0}, {0.0, 0.5, 0.0});
  const PLinearControl u1(g, {0.0, 0.5, 0.0}, {0.0, 0.0, 0.0});
  const PLinearControl u2(g, {0.0, 0.25, 0.0}, {0.0, 1.0, 0.0});
  const auto next = gpm_step(u, &u1, &u2, constant_gradient(g, {1.0, 2.0}), GpmVariant::ThreeStep, 0.1, 0.5, 0.2, box);
  EXPECT_DOUBLE_EQ(next.nodes(0)[1], 1.0 - 0.1 + 0.5 * 0.5 + 0.2 * 0.25);
  EXPECT_DOUBLE_EQ(next.nodes(1)[1], 0.5 - 0.2 + 0.5 * 0.5 + 0.2 * -1.0);
  // b(0) = 0 forces the end nodes back to zero.
  EXPECT_EQ(next.nodes(0)[0], 0.0);
  EXPECT_EQ(next.nodes(1)[2], 0.0);
}

TEST(GpmStep, OutputIsFeasible) {
  const double T = 2.0;
  const ControlBox box = ControlBox::make(T, 1.0, 0.5);
  const TimeGrid g = TimeGrid::uniform(T, 40);
  std::mt19937_64 rng(8);
  const auto u = random_plinear(g, box, rng);
  const auto next = gpm_step(u, nullptr, nullptr, constant_gradient(g, {-50.0, 50.0}), GpmVariant::OneStep, 1.0, 0.0,
                             0.0, box);
  EXPECT_TRUE(next.feasible(box));
}

TEST(GpmStep, MissingHistoryRejected) {
  const ControlBox box = ControlBox::make(1.0, 1.0, 1.0);
  const TimeGrid g = TimeGrid::uniform(1.0, 4);
  const auto u = PLinearControl::zeros(g);
  const auto grad = constant_gradient(g, {0.0, 0.0});
  EXPECT_THROW(gpm_step(u, nullptr, nullptr, grad, GpmVariant::TwoStep, 1.0, 0.5, 0.0, box), std::invalid_argument);
  EXPECT_THROW(gpm_step(u, &u, nullptr, grad, GpmVariant::ThreeStep, 1.0, 0.5, 0.5, box), std::invalid_argument);
  EXPECT_THROW(gpm_step(u, nullptr, nullptr, constant_gradient(TimeGrid::uniform(1.0, 3), {0.0, 0.0}),
                        GpmVariant::OneStep, 1.0, 0.0, 0.0, box),
               std::invalid_argument);
}

TEST(RunGpm, FirstStepFromZeroDecreasesThreeSiteTransfer) {
  const double T = pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  GpmConfig c = config(GpmVariant::OneStep);
  c.max_iters = 1;
  const auto run = run_gpm(m, ProblemSpec::transfer(m), box, PLinearControl::zeros(TimeGrid::uniform(T, 200)), c);
  ASSERT_EQ(run.objective_history.size(), 2u);
  EXPECT_NEAR(run.objective_history[0], 5.0 / 9.0, 1e-8);
  EXPECT_LT(run.objective_history[1], run.objective_history[0]);
}

TEST(RunGpm, StartAtPmpPointExitsImmediately) {
  // An eigenvector of H0 is stationary under u = 0, and u = 0 reaches I = 0 with no penalty.
  const double T = 2.0;
  const ChainModel m(2, T);
  ProblemSpec spec = ProblemSpec::keeping(m, 1.0);
  spec.psi0 = spec.psig = (CVector(2) << 1.0, 1.0).finished() / std::sqrt(2.0);
  spec.p_u = {0.5, 0.5};
  GpmConfig c = config(GpmVariant::OneStep);
  c.tol_res = 1e-10;
  const auto run = run_gpm(m, spec, ControlBox::make(T, 1.0, 1.0), PLinearControl::zeros(TimeGrid::uniform(T, 50)), c);
  EXPECT_EQ(run.objective_history.size(), 1u);
  EXPECT_EQ(run.reason, GpmStop::ResidualTolerance);
  EXPECT_LT(run.residual_history[0], 1e-10);
  EXPECT_EQ(run.forward_solve_count, 1u);
}

TEST(RunGpm, OrthogonalTerminalStateIsStationary) {
  // Two sites, T = pi: the free evolution returns the excitation to site 1, so the overlap
  // with the target and hence the whole gradient vanish at u = 0.
  const double T = pi;
  const ChainModel m(2, T);
  GpmConfig c = config(GpmVariant::OneStep);
  c.tol_res = 1e-8;
  const auto run = run_gpm(m, ProblemSpec::transfer(m), ControlBox::make(T, 5.0, 3.0),
                           PLinearControl::zeros(TimeGrid::uniform(T, 100)), c);
  EXPECT_NEAR(run.objective_history[0], 1.0, 1e-9);
  EXPECT_EQ(run.reason, GpmStop::ResidualTolerance);
}

TEST(RunGpm, TwoSiteTransferDescendsFromNonzeroStart) {
  const double T = pi;
  const ChainModel m(2, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  const TimeGrid g = TimeGrid::uniform(T, 100);
  const auto u0 = PLinearControl::sample(g, [&](double t) { return ControlPair{0.2 * box.channels[0].value(t), 0.0}; });
  GpmConfig c = config(GpmVariant::OneStep);
  c.max_iters = 10;
  const auto run = run_gpm(m, ProblemSpec::transfer(m), box, u0, c);
  ASSERT_EQ(run.objective_history.size(), 11u);
  for (std::size_t k = 1; k < run.objective_history.size(); ++k)
    EXPECT_LT(run.objective_history[k], run.objective_history[k - 1]);
}

TEST(RunGpm, AllVariantsDescendMonotonicallyAndStayFeasible) {
  const double T = pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  ProblemSpec spec = ProblemSpec::transfer(m);
  spec.p_u = {0.01, 0.01};
  const auto u0 = PLinearControl::zeros(TimeGrid::uniform(T, 200));
  for (const auto& c : {config(GpmVariant::OneStep), config(GpmVariant::TwoStep, 0.5),
                        config(GpmVariant::ThreeStep, 0.5, 0.2)}) {
    const auto run = run_gpm(m, spec, box, u0, c);
    expect_monotone(run);
    for (const auto& u : run.iterates) EXPECT_TRUE(u.feasible(box));
    EXPECT_EQ(run.forward_solves.back(), run.forward_solve_count);
    EXPECT_EQ(run.residual_history.size(), run.objective_history.size());
  }
}

TEST(RunGpm, KeepingProblemDescends) {
  const double T = 2 * pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  GpmConfig c = config(GpmVariant::TwoStep, 0.3);
  c.max_iters = 15;
  const auto run = run_gpm(m, ProblemSpec::keeping(m, 1.0), box, PLinearControl::zeros(TimeGrid::uniform(T, 200)), c);
  expect_monotone(run);
  EXPECT_LT(run.objective_history.back(), run.objective_history.front());
}

TEST(RunGpm, MomentumFreeVariantsReproduceOneStep) {
  const double T = pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  const ProblemSpec spec = ProblemSpec::transfer(m);
  const auto u0 = PLinearControl::zeros(TimeGrid::uniform(T, 150));
  const auto one = run_gpm(m, spec, box, u0, config(GpmVariant::OneStep));
  for (const auto& c : {config(GpmVariant::TwoStep, 0.0), config(GpmVariant::ThreeStep, 0.0, 0.0)}) {
    const auto other = run_gpm(m, spec, box, u0, c);
    ASSERT_EQ(other.iterates.size(), one.iterates.size());
    EXPECT_EQ(other.alpha_history, one.alpha_history);
    for (std::size_t k = 0; k < one.iterates.size(); ++k)
      for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t j = 0; j < u0.grid().size(); ++j)
          EXPECT_NEAR(other.iterates[k].nodes(l)[j], one.iterates[k].nodes(l)[j], 1e-14);
  }
}

TEST(RunGpm, ResidualStopIsConsistentAcrossStepSizes) {
  const double T = pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  const ProblemSpec spec = ProblemSpec::transfer(m);
  GpmConfig c = config(GpmVariant::OneStep);
  c.max_iters = 300;
  c.tol_res = 1e-6;
  const auto run = run_gpm(m, spec, box, PLinearControl::zeros(TimeGrid::uniform(T, 300)), c);
  ASSERT_EQ(run.reason, GpmStop::ResidualTolerance);
  for (double factor : {0.1, 1.0, 10.0})
    EXPECT_LT(pmp_residual(run.best(), run.final_gradient, factor * run.final_alpha, box), 10 * c.tol_res);
}

TEST(RunGpm, ObjectiveToleranceStops) {
  const double T = pi;
  const ChainModel m(3, T);
  GpmConfig c = config(GpmVariant::OneStep);
  c.max_iters = 500;
  c.tol_obj = 1e-3;
  const auto run = run_gpm(m, ProblemSpec::transfer(m), ControlBox::make(T, 5.0, 3.0),
                           PLinearControl::zeros(TimeGrid::uniform(T, 100)), c);
  EXPECT_EQ(run.reason, GpmStop::ObjectiveTolerance);
  const auto n = run.objective_history.size();
  EXPECT_LT(run.objective_history[n - 2] - run.objective_history[n - 1], 1e-3);
}

TEST(RunGpm, TwoStepAgainstOneStepIsLogged) {
  const double T = pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  ProblemSpec spec = ProblemSpec::transfer(m);
  spec.p_u = {0.01, 0.01};
  const auto u0 = PLinearControl::zeros(TimeGrid::uniform(T, 200));
  GpmConfig one = config(GpmVariant::OneStep), two = config(GpmVariant::TwoStep, 0.5);
  one.tol_obj = two.tol_obj = 1e-6;
  one.max_iters = two.max_iters = 200;
  const auto a = run_gpm(m, spec, box, u0, one), b = run_gpm(m, spec, box, u0, two);
  RecordProperty("one_step_iterations", static_cast<int>(a.objective_history.size() - 1));
  RecordProperty("two_step_iterations", static_cast<int>(b.objective_history.size() - 1));
  SUCCEED();
}

TEST(RunGpm, RejectsInfeasibleStart) {
  const double T = 1.0;
  const ChainModel m(3, T);
  const TimeGrid g = TimeGrid::uniform(T, 10);
  auto u0 = PLinearControl::zeros(g);
  u0.mutable_nodes(0)[0] = 0.1;
  EXPECT_THROW(run_gpm(m, ProblemSpec::transfer(m), ControlBox::make(T, 1.0, 1.0), u0, GpmConfig{}),
               std::invalid_argument);
}
