#include <gtest/gtest.h>

#include <cmath>

#include "mintime/characteristics.hpp"

using namespace mintime;

namespace {
const Params kUnit = Params::make(1.0, 1.0);
const Manifold kSquare = Manifold::square();

void expect_state(State a, State b, double tol) {
  EXPECT_NEAR(a.x1, b.x1, tol);
  EXPECT_NEAR(a.x2, b.x2, tol);
}

struct Target {
  Manifold m;
  Params p;
};

std::vector<Target> targets() {
  return {{Manifold::circle(0.5), Params::make(1.0, 0.5)},
          {Manifold::circle(1.0), kUnit},
          {Manifold::circle(2.0), Params::make(1.0, 2.0)},
          {kSquare, kUnit}};
}
}  // namespace

TEST(Hamiltonian, Examples) {
  EXPECT_DOUBLE_EQ(hamiltonian({0, 1}, {1, 0}, 0.3, kUnit), 2.0);
  EXPECT_DOUBLE_EQ(hamiltonian({0, 0}, {0, 1}, -1.0, kUnit), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian({0, 2}, {1, -3}, 1.0, Params::make(2.0, 1.0)), -3.0);
}

TEST(OptimalControl, SignRule) {
  EXPECT_EQ(optimal_control({0, 0.5}), -1.0);
  EXPECT_EQ(optimal_control({0, -2}), 1.0);
  EXPECT_THROW(optimal_control({1, 0}), SingularInstant);
}

TEST(TerminalCostate, Circle) {
  const auto m = Manifold::circle(1.0);
  const Costate top = terminal_costate(m, circle_point(kPi / 2), kUnit);
  EXPECT_NEAR(top.lambda1, 0.0, 1e-15);
  EXPECT_NEAR(top.lambda2, 1.0, 1e-15);
  const Costate c = terminal_costate(m, circle_point(2 * kPi / 3), kUnit);
  const double a = 4.0 / (3.0 * std::sqrt(3.0));
  EXPECT_NEAR(c.lambda1, -0.5 * a, 1e-12);
  EXPECT_NEAR(c.lambda2, std::sqrt(3.0) / 2 * a, 1e-12);
  EXPECT_NEAR(c.lambda1, -0.38490, 1e-5);
  EXPECT_NEAR(c.lambda2, 0.66667, 1e-5);
}

TEST(TerminalCostate, Square) {
  const Costate ab = terminal_costate(kSquare, side_point(Side::AB, 0.5), kUnit);
  EXPECT_DOUBLE_EQ(ab.lambda1, -2.0);
  EXPECT_DOUBLE_EQ(ab.lambda2, 0.0);
  const Costate bc = terminal_costate(kSquare, side_point(Side::BC, 0.2), kUnit);
  EXPECT_DOUBLE_EQ(bc.lambda1, 0.0);
  EXPECT_DOUBLE_EQ(bc.lambda2, -1.0);
  const Costate cd = terminal_costate(kSquare, side_point(Side::CD, -0.25), kUnit);
  EXPECT_DOUBLE_EQ(cd.lambda1, 4.0);
  const Costate a = terminal_costate(kSquare, corner_point(Corner::A, 3 * kPi / 4), kUnit);
  EXPECT_NEAR(a.lambda1, -0.5, 1e-15);
  EXPECT_NEAR(a.lambda2, 0.5, 1e-15);
}

TEST(TerminalCostate, RejectsNonUsable) {
  const auto p2 = Params::make(1.0, 2.0);
  EXPECT_THROW(terminal_costate(Manifold::circle(2.0), circle_point(kPi / 6), p2), DomainError);
  EXPECT_THROW(terminal_costate(Manifold::circle(2.0), circle_point(kPi / 3), p2), DomainError);
  EXPECT_THROW(terminal_costate(kSquare, side_point(Side::AB, -0.5), kUnit), DomainError);
}

TEST(TerminalCostate, PositiveScaleEverywhereOnUp) {
  for (double l : {0.5, 1.0, 2.0}) {
    const auto m = Manifold::circle(l);
    const auto p = Params::make(1.0, l);
    for (const auto& b : sample_up(m, p, 500)) {
      const Costate c = terminal_costate(m, b, p);
      const Normal n = outward_normal(m, b);
      const double a = c.lambda1 * n.n1 + c.lambda2 * n.n2;
      EXPECT_GT(a, 0.0);
      EXPECT_NEAR(c.lambda1 * n.n2 - c.lambda2 * n.n1, 0.0, 1e-9 * (1 + a));
    }
  }
}

TEST(SwitchTau, Examples) {
  EXPECT_NEAR(*switch_tau(circle_point(3 * kPi / 4)), 1.0, 1e-15);
  EXPECT_FALSE(switch_tau(circle_point(kPi / 4)));
  EXPECT_FALSE(switch_tau(circle_point(kPi / 2)));
  EXPECT_FALSE(switch_tau(circle_point(5 * kPi / 4)));
  EXPECT_NEAR(*switch_tau(circle_point(7 * kPi / 4)), 1.0, 1e-15);
  EXPECT_NEAR(*switch_tau(corner_point(Corner::A, kPi - std::atan(2.0))), 2.0, 1e-14);
  EXPECT_FALSE(switch_tau(side_point(Side::AD, 0.0)));
}

TEST(CostateRetro, Examples) {
  const Costate c = costate_retro(Manifold::circle(1.0), circle_point(kPi / 2), kUnit, 2.0);
  EXPECT_NEAR(c.lambda1, 0.0, 1e-15);
  EXPECT_NEAR(c.lambda2, 1.0, 1e-15);
  const Costate ad = costate_retro(kSquare, side_point(Side::AD, 0.3), kUnit, 3.0);
  EXPECT_EQ(ad.lambda1, 0.0);
  EXPECT_EQ(ad.lambda2, 1.0);
  const Costate ab = costate_retro(kSquare, side_point(Side::AB, 1.0), kUnit, 2.0);
  EXPECT_DOUBLE_EQ(ab.lambda2, -2.0);
}

TEST(ClosedForm, Examples) {
  expect_state(closed_form_state(Manifold::circle(1.0), circle_point(kPi / 2), kUnit, 1.0), {-1.5, 2.0}, 1e-15);
  expect_state(closed_form_state(kSquare, side_point(Side::AD, 0.5), kUnit, 1.0), {-1.0, 2.0}, 1e-15);
  expect_state(closed_form_state(kSquare, corner_point(Corner::C, 7 * kPi / 4), kUnit, 1.0), {2.5, -2.0}, 1e-14);
  expect_state(closed_form_state(kSquare, side_point(Side::BC, 0.0), kUnit, 2.0), {4.0, -3.0}, 1e-15);
}

TEST(ClosedForm, RequiresUnitAlpha) {
  EXPECT_THROW(closed_form_state(Manifold::circle(1.0), circle_point(kPi / 2), Params::make(2.0, 1.0), 1.0),
               ClosedFormUnavailable);
}

TEST(NumericRetro, Examples) {
  const auto c1 = Manifold::circle(1.0);
  expect_state(numeric_retro(c1, circle_point(kPi / 2), kUnit, 1.0, 1e-3).first, {-1.5, 2.0}, 1e-9);
  const auto [x0, l0] = numeric_retro(c1, circle_point(2.0), kUnit, 0.0, 1e-3);
  EXPECT_EQ(x0, boundary_state(c1, circle_point(2.0)));
  EXPECT_EQ(l0.lambda2, terminal_costate(c1, circle_point(2.0), kUnit).lambda2);
  expect_state(numeric_retro(kSquare, side_point(Side::BC, 0.0), kUnit, 2.0, 1e-3).first, {4.0, -3.0}, 1e-9);
  EXPECT_THROW(numeric_retro(c1, circle_point(kPi / 2), kUnit, 1.0, 0.0), DomainError);
}

TEST(NumericRetro, GeneralAlphaMatchesArcs) {
  const auto m = Manifold::circle(1.5);
  const auto p = Params::make(0.7, 1.5);
  for (const auto& b : sample_up(m, p, 20)) {
    const Characteristic ch = characteristic(m, b, p);
    for (double tau : {0.3, 1.7, 4.0}) {
      expect_state(numeric_retro(m, b, p, tau, 1e-3).first, ch.state_at(tau, p), 1e-9);
    }
  }
}

TEST(Characteristic, HamiltonianVanishes) {
  for (const auto& [m, p] : targets()) {
    for (const auto& b : sample_up(m, p, 30)) {
      const Characteristic ch = characteristic(m, b, p);
      for (int k = 0; k <= 50; ++k) {
        const double tau = 0.2 * k;
        const Costate c = costate_retro(m, b, p, tau);
        // |H*| relative to the costate scale, which blows up near the BUP
        const double scale = 1.0 + std::abs(c.lambda1) + std::abs(c.lambda2);
        EXPECT_NEAR(optimal_hamiltonian(ch.state_at(tau, p), c, p) / scale, 0.0, 1e-12);
      }
    }
  }
}

TEST(Characteristic, ClosedFormMatchesArcs) {
  for (const auto& [m, p] : targets()) {
    for (const auto& b : sample_up(m, p, 30)) {
      const Characteristic ch = characteristic(m, b, p);
      for (double tau : {0.0, 0.5, 1.0, 2.5, 7.0}) {
        expect_state(closed_form_state(m, b, p, tau), ch.state_at(tau, p), 1e-12 * (1 + tau * tau));
      }
    }
  }
}

TEST(Characteristic, ParabolaInvariantAlongArcs) {
  // x1 - u x2^2 / 2 is constant along an arc with forward control u
  for (const auto& [m, p] : targets()) {
    for (const auto& b : sample_up(m, p, 15)) {
      const Characteristic ch = characteristic(m, b, p);
      for (const auto& arc : ch.arcs) {
        const double t0 = arc.tau_start;
        const double t1 = std::isfinite(arc.tau_end) ? arc.tau_end : t0 + 5.0;
        const State s0 = arc.at(t0, p);
        const double k0 = s0.x1 - arc.control * s0.x2 * s0.x2 / 2;
        for (int i = 1; i <= 10; ++i) {
          const State s = arc.at(t0 + (t1 - t0) * i / 10.0, p);
          EXPECT_NEAR(s.x1 - arc.control * s.x2 * s.x2 / 2, k0, 1e-12 * (1 + std::abs(k0) + s.x2 * s.x2));
        }
      }
    }
  }
}

TEST(Characteristic, SwitchMatchesCostateSign) {
  const auto m = Manifold::circle(1.0);
  for (const auto& b : sample_up(m, kUnit, 40)) {
    const Characteristic ch = characteristic(m, b, kUnit);
    for (double tau : {0.05, 0.7, 1.9, 6.0}) {
      const Costate c = costate_retro(m, b, kUnit, tau);
      if (std::abs(c.lambda2) < 1e-9) continue;
      EXPECT_EQ(ch.control_at(tau), optimal_control(c));
    }
  }
}

TEST(Characteristic, CentralAntisymmetry) {
  for (const auto& [m, p] : targets()) {
    for (const auto& b : sample_up(m, p, 15)) {
      const Characteristic ch = characteristic(m, b, p);
      const Characteristic rc = characteristic(m, reflect(b), p);
      for (double tau : {0.0, 0.4, 1.3, 3.0}) {
        expect_state(rc.state_at(tau, p), -ch.state_at(tau, p), 1e-12);
      }
    }
  }
}

TEST(FlowField, RowsPerAnchorAndTau) {
  const auto m = Manifold::circle(1.0);
  const auto anchors = sample_up(m, kUnit, 3);
  const auto rows = flow_field(m, kUnit, anchors, {0.0, 0.5, 1.0});
  ASSERT_EQ(rows.size(), anchors.size() * 3);
  EXPECT_EQ(rows[0].x, boundary_state(m, anchors[0]));
  for (const auto& r : rows) EXPECT_TRUE(r.u == 1.0 || r.u == -1.0);
}
