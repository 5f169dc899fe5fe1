#include <gtest/gtest.h>

#include "spinchain/objectives.hpp"
#include "support.hpp"

using namespace spinchain;
using namespace spinchain::testing;

TEST(Infidelity, Extremes) {
  EXPECT_EQ(infidelity(basis_state(4, 0), basis_state(4, 3)), 1.0);
  std::mt19937_64 rng(2);
  const CVector v = random_unit_vector(4, rng);
  EXPECT_NEAR(infidelity(v, v), 0.0, 1e-15);
}

TEST(Infidelity, PhaseInvariant) {
  std::mt19937_64 rng(6);
  const CVector v = random_unit_vector(5, rng), g = random_unit_vector(5, rng);
  const Complex phase = std::polar(1.0, 2.1);
  EXPECT_NEAR(infidelity(phase * v, g), infidelity(v, g), 1e-15);
}

TEST(Infidelity, RejectsNonUnitInputs) {
  EXPECT_THROW(infidelity(2.0 * basis_state(3, 0), basis_state(3, 1)), std::invalid_argument);
  EXPECT_THROW(infidelity(basis_state(3, 0), basis_state(2, 1)), std::invalid_argument);
}

TEST(ProblemSpec, FactoriesAndValidation) {
  const ChainModel m(4, 1.0);
  const ProblemSpec t = ProblemSpec::transfer(m);
  EXPECT_EQ(t.psi0, basis_state(4, 0));
  EXPECT_EQ(t.psig, basis_state(4, 3));
  EXPECT_NO_THROW(t.validate(4));
  EXPECT_THROW(t.validate(3), std::invalid_argument);
  const ProblemSpec k = ProblemSpec::keeping(m, 2.0);
  EXPECT_EQ(k.psi0, k.psig);
  EXPECT_EQ(k.p_psi, 2.0);
  EXPECT_THROW(ProblemSpec::keeping(m, 0.0).validate(4), std::invalid_argument);
  ProblemSpec bad = t;
  bad.psig = bad.psi0;
  EXPECT_THROW(bad.validate(4), std::invalid_argument);
  bad = t;
  bad.p_u = {-1.0, 0.0};
  EXPECT_THROW(bad.validate(4), std::invalid_argument);
}

TEST(ObjectiveI, TransferAtTargetIsZero) {
  const ChainModel m(3, 1.0);
  const ProblemSpec spec = ProblemSpec::transfer(m);
  Trajectory traj{{0.0, 1.0}, {spec.psi0, spec.psig}};
  EXPECT_EQ(objective_I(traj, spec), 0.0);
}

TEST(ObjectiveI, TransferZeroControlAtPi) {
  const ChainModel m(3, pi);
  const ProblemSpec spec = ProblemSpec::transfer(m);
  const Trajectory traj = propagate_pconst(m, PConstControl::zeros(TimeGrid::uniform(pi, 10)), spec.psi0);
  EXPECT_NEAR(objective_I(traj, spec), 5.0 / 9.0, 1e-13);
}

TEST(ObjectiveI, KeepingZeroControlOverTwoPeriods) {
  // F(T) = 0 at T = 4 pi and the integral of the keeping curve over [0, 4 pi] is 22 pi / 9.
  const double T = 4 * pi;
  const ChainModel m(3, T);
  const ProblemSpec spec = ProblemSpec::keeping(m, 1.0);
  const Trajectory traj = propagate_pconst(m, PConstControl::zeros(TimeGrid::uniform(T, 1000)), spec.psi0);
  EXPECT_NEAR(objective_I(traj, spec), 7.67944870877505014, 1e-8);
}

TEST(ObjectiveI, KeepingWeightScalesIntegral) {
  const double T = 4 * pi;
  const ChainModel m(3, T);
  const Trajectory traj =
      propagate_pconst(m, PConstControl::zeros(TimeGrid::uniform(T, 1000)), basis_state(3, 2));
  EXPECT_NEAR(objective_I(traj, ProblemSpec::keeping(m, 3.0)), 3 * 7.67944870877505014, 1e-7);
}

TEST(ObjectivePhi, NoPenaltyOrZeroControlEqualsI) {
  std::mt19937_64 rng(9);
  const double T = 1.5;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  const TimeGrid g = TimeGrid::uniform(T, 20);
  const auto c = random_pconst(g, box, rng);
  ProblemSpec spec = ProblemSpec::transfer(m);
  const Trajectory traj = propagate_pconst(m, c, spec.psi0);
  EXPECT_EQ(objective_Phi(traj, c, spec), objective_I(traj, spec));
  spec.p_u = {1.0, 1.0};
  const Trajectory free = propagate_pconst(m, PConstControl::zeros(g), spec.psi0);
  EXPECT_EQ(objective_Phi(free, PConstControl::zeros(g), spec), objective_I(free, spec));
  EXPECT_GT(objective_Phi(traj, c, spec), objective_I(traj, spec));
}

TEST(ObjectivePhi, ConstantUnitControlPenalty) {
  // Integral over [0, 2] of exp(20 (t/2 - 1/2)^2), evaluated to 30 digits offline.
  const double T = 2.0;
  const ChainModel m(3, T);
  ProblemSpec spec = ProblemSpec::transfer(m);
  spec.p_u = {1.0, 0.0};
  spec.quadrature = QuadratureRule::Simpson;
  const TimeGrid g = TimeGrid::uniform(T, 2000);
  const PConstControl one(TimeGrid::uniform(T, 1), {1.0, 0.0});
  EXPECT_NEAR(control_penalty(one, g.nodes(), spec), 34.3443155476829797, 1e-8);
}

TEST(ControlPenalty, WeightsChannelsSeparately) {
  const double T = 2.0;
  const ChainModel m(3, T);
  ProblemSpec spec = ProblemSpec::transfer(m);
  spec.p_u = {0.0, 2.0};
  spec.quadrature = QuadratureRule::Simpson;
  const PConstControl c(TimeGrid::uniform(T, 1), {7.0, 0.5});
  // int_0^2 exp(20 (t/2 - 1/2)^2) dt
  const double weight_integral = 34.3443155476829796811575900734;
  EXPECT_NEAR(control_penalty(c, TimeGrid::uniform(T, 2000).nodes(), spec), 2.0 * 0.25 * weight_integral, 1e-8);
}

TEST(SampleL1, SumsAbsoluteCoefficients) {
  EXPECT_EQ(sample_l1(PConstControl(TimeGrid::uniform(1.0, 2), {1.0, -2.0, 0.5, -0.25})), 3.75);
}

TEST(ObjectiveF3, ZeroAmplitudesGiveFreeEvolution) {
  const double T = pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  const TimeGrid g = TimeGrid::uniform(T, 300);
  const std::vector<double> x{0, 0, 0, 0, 0, 0, 0.1 * T, 0.2 * T, 0.8 * T, 0.9 * T};
  ProblemSpec spec = ProblemSpec::transfer(m);
  EXPECT_NEAR(objective_f3(x, m, spec, g, box), 5.0 / 9.0, 1e-12);
  spec.p_x = 10.0;
  EXPECT_NEAR(objective_f3(x, m, spec, g, box), 5.0 / 9.0, 1e-12);
}

TEST(ObjectiveF3, PenaltyOffEqualsTerminalInfidelity) {
  const double T = pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  const TimeGrid g = TimeGrid::uniform(T, 300);
  const std::vector<double> x{0.5, -0.3, 0.2, 0.9, 0.4, -0.1, 0.1 * T, 0.2 * T, 0.8 * T, 0.9 * T};
  const ProblemSpec spec = ProblemSpec::transfer(m);
  const PConstControl pc = discretize_pconst(SpecialClassControl(x, box), g, box);
  EXPECT_DOUBLE_EQ(objective_f3(x, m, spec, g, box), infidelity(propagate_pconst_final(m, pc, spec.psi0), spec.psig));
}

TEST(ObjectiveF4, ZeroAmplitudesGiveMaxOfKeepingCurve) {
  const double T = 2 * pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  const TimeGrid g = TimeGrid::uniform(T, 250);
  ProblemSpec spec = ProblemSpec::keeping(m, 1.0);
  spec.p_y = 1.0;
  const std::vector<double> y{0.0, 2.0, 0.0, 3.0, 0.0, 1.0, 0.0, 5.0};
  double expected = 0;
  for (std::size_t j = 1; j < g.size(); ++j) expected = std::max(expected, keeping_curve(g[j]));
  EXPECT_NEAR(objective_f4(y, m, spec, g, box), expected, 1e-12);
}

TEST(ObjectiveF4, PenaltyCountsSamples) {
  const double T = 2 * pi;
  const ChainModel m(3, T);
  const ControlBox box = ControlBox::make(T, 5.0, 3.0);
  const TimeGrid g = TimeGrid::uniform(T, 100);
  ProblemSpec spec = ProblemSpec::keeping(m, 1.0);
  const std::vector<double> y{0.5, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
  const double bare = objective_f4(y, m, spec, g, box);
  spec.p_y = 2.0;
  const double l1 = sample_l1(discretize_pconst(SineBasisControl(y, box), g, box));
  EXPECT_GT(l1, 0.0);
  EXPECT_NEAR(objective_f4(y, m, spec, g, box), bare + 2.0 * l1, 1e-12);
}
