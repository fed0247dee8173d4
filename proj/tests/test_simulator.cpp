#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mintime/simulator.hpp"

using namespace mintime;

namespace {
const Params kUnit = Params::make(1.0, 1.0);
const Manifold kCircle1 = Manifold::circle(1.0);
const Manifold kSquare = Manifold::square();
}  // namespace

TEST(Simulate, CircleExample) {
  const Trajectory tr = simulate(kCircle1, kUnit, {-1.5, 2.0}, 1e-3, 10.0);
  ASSERT_EQ(tr.termination, Termination::ReachedUP);
  EXPECT_NEAR(tr.t_final, 1.0, 2e-3);
  ASSERT_TRUE(tr.terminal);
  EXPECT_NEAR(std::get<CircleTheta>(*tr.terminal).theta, kPi / 2, 1e-6);
  EXPECT_EQ(tr.control_switches(), 0);
  EXPECT_NEAR(signed_distance(kCircle1, tr.samples.back().x), 0.0, 1e-10);
}

TEST(Simulate, StartOnUsablePart) {
  const Trajectory tr = simulate(kCircle1, kUnit, {0.0, 1.0}, 1e-3, 10.0);
  EXPECT_EQ(tr.termination, Termination::ReachedUP);
  EXPECT_EQ(tr.samples.size(), 1u);
  EXPECT_EQ(tr.t_final, 0.0);
  EXPECT_EQ(verify_rollout(tr, kCircle1, kUnit).max_deviation, 0.0);
}

TEST(Simulate, SquareSwitchOnCurveA) {
  const Trajectory tr = simulate(kSquare, kUnit, {-3.0, 1.0}, 1e-3, 10.0);
  ASSERT_EQ(tr.termination, Termination::ReachedUP);
  EXPECT_EQ(tr.control_switches(), 1);
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    if (tr.samples[i].u != tr.samples[i - 1].u) {
      EXPECT_NEAR(tr.samples[i].x.x1, -2.0, 1e-3);
      EXPECT_NEAR(tr.samples[i].x.x2, std::sqrt(3.0), 1e-3);
    }
  }
  EXPECT_NEAR(tr.t_final, 2.0 * std::sqrt(3.0) - 2.0, 2e-3);
  EXPECT_EQ(std::get<SquareCorner>(*tr.terminal).corner, Corner::A);
}

TEST(Simulate, TimeIncreasesAndLimitIsReported) {
  const Trajectory tr = simulate(kSquare, kUnit, {5.0, 3.0}, 1e-2, 1.0);
  EXPECT_EQ(tr.termination, Termination::MaxTimeExceeded);
  for (std::size_t i = 1; i < tr.samples.size(); ++i) EXPECT_GT(tr.samples[i].t, tr.samples[i - 1].t);
  EXPECT_THROW(simulate(kSquare, kUnit, {5.0, 3.0}, 0.0, 1.0), DomainError);
  EXPECT_THROW(simulate(kSquare, kUnit, {0.0, 0.0}, 1e-2, 1.0), DomainError);
}

TEST(VerifyRollout, OptimalRolloutPasses) {
  const Trajectory tr = simulate(kCircle1, kUnit, {-1.5, 2.0}, 1e-3, 10.0);
  const auto rep = verify_rollout(tr, kCircle1, kUnit);
  EXPECT_LE(rep.max_deviation, 5e-3);
  EXPECT_FALSE(rep.violation);
  EXPECT_GT(rep.checked, 900u);
}

TEST(VerifyRollout, WrongControlIsFlagged) {
  const Trajectory tr = simulate_policy(kCircle1, kUnit, {-1.5, 2.0}, 1e-3, 10.0, [](State) { return 1.0; });
  EXPECT_TRUE(verify_rollout(tr, kCircle1, kUnit).violation);
}

class RandomRollouts : public ::testing::TestWithParam<int> {};

TEST_P(RandomRollouts, MatchValueAndEndOnUsablePart) {
  std::mt19937 rng(1234 + GetParam());
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  for (const auto& [m, p] : {std::pair{kCircle1, kUnit}, std::pair{kSquare, kUnit},
                             std::pair{Manifold::circle(2.0), Params::make(1.0, 2.0)}}) {
    State s0;
    do {
      s0 = {coord(rng), coord(rng)};
    } while (contains(m, s0));
    const double dt = 1e-3;
    const Trajectory tr = simulate(m, p, s0, dt, 50.0);
    ASSERT_EQ(tr.termination, Termination::ReachedUP);
    EXPECT_NEAR(tr.t_final, value(m, p, s0), 2 * dt) << s0.x1 << " " << s0.x2;
    EXPECT_EQ(classify(m, *tr.terminal, p), RegionClass::UP);
    EXPECT_LE(tr.control_switches(), 1);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomRollouts, ::testing::Range(0, 5));

TEST(ValueRate, DecreasesAtUnitRate) {
  const double dt = 1e-3;
  const Trajectory tr = simulate(kSquare, kUnit, {4.0, -1.0}, dt, 20.0);
  ASSERT_EQ(tr.termination, Termination::ReachedUP);
  for (std::size_t i = 0; i + 1 < tr.samples.size(); ++i) {
    const auto& a = tr.samples[i];
    const auto& b = tr.samples[i + 1];
    if (a.u != b.u || b.t - a.t < 0.5 * dt) continue;
    const double rate = (value(kSquare, kUnit, b.x) - value(kSquare, kUnit, a.x)) / (b.t - a.t);
    EXPECT_NEAR(rate, -1.0, 1e-3) << a.t;
  }
}
