#include <gtest/gtest.h>

#include <cmath>

#include "spinchain/grid.hpp"

using namespace spinchain;

TEST(TimeGrid, UniformHasExactEndpoints) {
  const TimeGrid g = TimeGrid::uniform(3.0, 7);
  ASSERT_EQ(g.size(), 8u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 3.0);
  for (std::size_t j = 0; j < g.intervals(); ++j) EXPECT_NEAR(g.step(j), 3.0 / 7, 1e-15);
}

TEST(TimeGrid, RejectsNonIncreasingNodes) {
  EXPECT_THROW(TimeGrid({0.0, 1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(TimeGrid({0.0}), std::invalid_argument);
  EXPECT_THROW(TimeGrid::uniform(1.0, 0), std::invalid_argument);
  EXPECT_THROW(TimeGrid::uniform(-1.0, 4), std::invalid_argument);
}

TEST(TimeGrid, LocateIsLeftClosed) {
  const TimeGrid g({0.0, 1.0, 2.5, 4.0});
  EXPECT_EQ(g.locate(0.0), 0u);
  EXPECT_EQ(g.locate(0.999), 0u);
  EXPECT_EQ(g.locate(1.0), 1u);
  EXPECT_EQ(g.locate(2.5), 2u);
  EXPECT_EQ(g.locate(4.0), 2u);
  EXPECT_EQ(g.locate(9.0), 2u);
  EXPECT_EQ(g.locate(-1.0), 0u);
}

TEST(TimeGrid, RefinedKeepsOriginalNodes) {
  const TimeGrid g({0.0, 1.0, 3.0});
  const TimeGrid r = g.refined(4);
  ASSERT_EQ(r.size(), 9u);
  EXPECT_EQ(r[0], 0.0);
  EXPECT_EQ(r[4], 1.0);
  EXPECT_EQ(r[8], 3.0);
  EXPECT_NEAR(r[6], 2.0, 1e-15);
  EXPECT_EQ(g.refined(1), g);
}

TEST(Quadrature, TrapezoidIntegratesLinearExactly) {
  const TimeGrid g({0.0, 0.3, 1.1, 2.0});
  const auto w = quadrature_weights(g.nodes(), QuadratureRule::Trapezoid);
  double s = 0;
  for (std::size_t k = 0; k < g.size(); ++k) s += w[k] * (2 * g[k] + 1);
  EXPECT_NEAR(s, 4.0 + 2.0, 1e-14);
}

TEST(Quadrature, SimpsonIntegratesQuadraticsOnNonUniformPairs) {
  const TimeGrid g({0.0, 0.2, 0.7, 1.0, 1.9});
  const auto w = quadrature_weights(g.nodes(), QuadratureRule::Simpson);
  double s = 0;
  for (std::size_t k = 0; k < g.size(); ++k) s += w[k] * g[k] * g[k];
  EXPECT_NEAR(s, std::pow(1.9, 3) / 3, 1e-13);
}

TEST(Quadrature, SimpsonNeedsEvenIntervalCount) {
  const TimeGrid g = TimeGrid::uniform(1.0, 3);
  EXPECT_THROW(quadrature_weights(g.nodes(), QuadratureRule::Simpson), std::invalid_argument);
}
