#include <gtest/gtest.h>

#include "mintime/model.hpp"

using namespace mintime;

TEST(Nondimensionalize, UnitInputsGiveUnitAlpha) {
  EXPECT_DOUBLE_EQ(nondimensionalize({1.0, 1.0, 1.0, 1.0}).alpha(), 1.0);
}

TEST(Nondimensionalize, HeavierMassHalvesAlpha) {
  EXPECT_DOUBLE_EQ(nondimensionalize({2.0, 1.0, 1.0, 1.0}).alpha(), 0.5);
}

TEST(Nondimensionalize, AlphaFormula) {
  // L F / (m V^2) = 3 * 4 / (2 * 25)
  EXPECT_DOUBLE_EQ(nondimensionalize({2.0, 4.0, 3.0, 5.0}, 0.7).alpha(), 0.24);
  EXPECT_DOUBLE_EQ(nondimensionalize({2.0, 4.0, 3.0, 5.0}, 0.7).l(), 0.7);
}

TEST(Nondimensionalize, RejectsNonPositive) {
  EXPECT_THROW(nondimensionalize({1.0, 0.0, 1.0, 1.0}), DomainError);
  EXPECT_THROW(nondimensionalize({-1.0, 1.0, 1.0, 1.0}), DomainError);
  EXPECT_THROW(nondimensionalize({1.0, 1.0, 1.0, 0.0}), DomainError);
}

TEST(Params, Validation) {
  EXPECT_THROW(Params::make(0.0, 1.0), DomainError);
  EXPECT_THROW(Params::make(1.0, -2.0), DomainError);
  EXPECT_THROW(Params::make(1.0, 1.0, 2.0), DomainError);
  EXPECT_THROW(Params::make(std::nan(""), 1.0), DomainError);
  EXPECT_EQ(Params::make(2.0, 3.0).beta(), 1.0);
}

TEST(Dynamics, Examples) {
  const auto p1 = Params::make(1.0, 1.0);
  EXPECT_EQ(dynamics({0, 0}, 1.0, p1), (State{0, 1}));
  EXPECT_EQ(dynamics({1, 2}, -1.0, p1), (State{2, -1}));
  EXPECT_EQ(dynamics({0, 1}, 0.5, Params::make(2.0, 1.0)), (State{1, 1}));
}

TEST(Dynamics, RejectsControlOutOfBounds) {
  const auto p = Params::make(1.0, 1.0);
  EXPECT_THROW(dynamics({0, 0}, 1.5, p), DomainError);
  EXPECT_THROW(dynamics({0, 0}, std::nan(""), p), DomainError);
}

TEST(Dynamics, LinearInControl) {
  const auto p = Params::make(1.7, 1.0);
  const State s{0.3, -2.1};
  for (double a : {0.0, 0.25, 0.5, 1.0}) {
    const State lhs = dynamics(s, a * 0.8 + (1 - a) * -0.6, p);
    const State rhs = a * dynamics(s, 0.8, p) + (1 - a) * dynamics(s, -0.6, p);
    EXPECT_NEAR(lhs.x1, rhs.x1, 1e-15);
    EXPECT_NEAR(lhs.x2, rhs.x2, 1e-15);
  }
}

TEST(Dynamics, CentralSymmetry) {
  const auto p = Params::make(0.6, 1.0);
  for (double u : {-1.0, -0.3, 0.0, 1.0}) {
    const State s{1.25, -0.75};
    EXPECT_EQ(dynamics(-s, -u, p), -dynamics(s, u, p));
  }
}

TEST(Propagate, MatchesParabola) {
  const auto p = Params::make(2.0, 1.0);
  const State x = propagate({1.0, 1.0}, -1.0, 1.5, p);
  EXPECT_DOUBLE_EQ(x.x1, 1.0 + 1.5 - 2.25);
  EXPECT_DOUBLE_EQ(x.x2, 1.0 - 3.0);
  // x1 - u x2^2 / (2 alpha) is conserved
  EXPECT_NEAR(x.x1 + x.x2 * x.x2 / 4.0, 1.0 + 0.25, 1e-14);
}
