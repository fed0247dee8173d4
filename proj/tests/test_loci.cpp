#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "mintime/loci.hpp"
#include "mintime/oracle.hpp"

using namespace mintime;

namespace {
struct Case {
  Manifold m;
  double l;
  double k;    // locus a: x1 + x2^2 / 2 = k
  double gap;  // value jump across it
};

const std::vector<Locus>& loci_for(const Manifold& m, double l) {
  static std::map<double, std::vector<Locus>> cache;
  const double key = m.is_circle() ? l : -1.0;
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, discontinuity_loci(m, Params::make(1.0, l))).first;
  return it->second;
}
}  // namespace

class JumpLoci : public ::testing::TestWithParam<Case> {};

TEST_P(JumpLoci, TwoMirroredParabolicLoci) {
  const auto& c = GetParam();
  const auto& loci = loci_for(c.m, c.l);
  ASSERT_EQ(loci.size(), 2u);
  EXPECT_EQ(loci[0].id, "a");
  EXPECT_EQ(loci[1].id, "b");
  ASSERT_EQ(loci[0].points.size(), loci[1].points.size());
  for (const auto& p : loci[0].points) {
    EXPECT_NEAR(p.x.x1 + p.x.x2 * p.x.x2 / 2, c.k, 1e-6);
    EXPECT_NEAR(p.v_hi - p.v_lo, c.gap, 1e-4);
    EXPECT_TRUE(p.limiting);
  }
  for (const auto& p : loci[1].points) EXPECT_NEAR(p.x.x1 - p.x.x2 * p.x.x2 / 2, -c.k, 1e-6);
  // (b) = -(a) pointwise, up to the sampling
  for (const auto& p : loci[0].points) EXPECT_LE(distance_to_loci({loci[1]}, -p.x), 1e-6);
}

TEST_P(JumpLoci, OracleSeesTheJump) {
  const auto& c = GetParam();
  const auto p = Params::make(1.0, c.l);
  const auto& a = loci_for(c.m, c.l)[0];
  for (std::size_t i = 0; i < a.points.size(); i += a.points.size() / 6) {
    const State x = a.points[i].x;
    if (signed_distance(c.m, x) < 0.2) continue;  // end of the locus at the target
    const double below = oracle_min_time(c.m, p, x - 0.01 * State{0, 1});
    const double above = oracle_min_time(c.m, p, x + 0.01 * State{0, 1});
    EXPECT_GT(std::abs(above - below), 0.5 * c.gap) << x.x1 << " " << x.x2;
  }
}

// circle l = 2 jumps by a constant 2.88877 along the parabola through the
// grazing point (1, sqrt 3); the square by 2 along the one through D
INSTANTIATE_TEST_SUITE_P(Targets, JumpLoci,
                         ::testing::Values(Case{Manifold::circle(2.0), 2.0, 2.5, 2.888773},
                                           Case{Manifold::square(), 1.0, 1.5, 2.0}),
                         [](const auto& info) { return info.param.m.is_circle() ? "circle_l2" : "square"; });

TEST(Loci, LargeCircleLocusHeadsToGraze) {
  // the locus runs into the tangency at (1, sqrt 3); the last stretch is
  // thinner than the scan step
  const auto& a = loci_for(Manifold::circle(2.0), 2.0)[0];
  double closest = 1e9;
  for (const auto& p : a.points) closest = std::min(closest, norm(p.x - State{1.0, std::sqrt(3.0)}));
  EXPECT_LT(closest, 0.2);
}

TEST(Loci, UnitCircleSteepFront) {
  // value is continuous here but with unbounded slope along x1 + x2^2/2 = 1
  const auto& loci = loci_for(Manifold::circle(1.0), 1.0);
  ASSERT_EQ(loci.size(), 2u);
  EXPECT_GT(loci[0].points.size(), 100u);
  for (const auto& p : loci[0].points) {
    EXPECT_NEAR(p.x.x1 + p.x.x2 * p.x.x2 / 2, 1.0, 1e-6);
    EXPECT_GT(p.v_hi - p.v_lo, 1e-3);
    EXPECT_LT(p.v_hi - p.v_lo, 0.02);
  }
}

TEST(Loci, SmallCircleHasNone) {
  EXPECT_TRUE(loci_for(Manifold::circle(0.5), 0.5).empty());
}

TEST(Loci, FeedbackFlagsLocusPoints) {
  const auto m = Manifold::circle(2.0);
  const auto p = Params::make(1.0, 2.0);
  const auto& a = loci_for(m, 2.0)[0];
  const LocusPoint& q = a.points[a.points.size() / 2];
  const auto r = feedback(m, p, q.x);
  EXPECT_TRUE(r.discontinuity_flag);
  // the smaller side, read 1e-9 away where the low family is steep
  EXPECT_NEAR(r.time_to_go, q.v_lo, 1e-4);
  FeedbackOptions plain;
  plain.detect_discontinuity = false;
  const double bare = feedback(m, p, q.x, plain).time_to_go;
  EXPECT_TRUE(std::abs(bare - q.v_lo) < 1e-6 || std::abs(bare - q.v_hi) < 1e-6);
  EXPECT_FALSE(feedback(m, p, q.x + State{0.0, 0.3}).discontinuity_flag);
}

TEST(Loci, DistanceToLoci) {
  const auto& loci = loci_for(Manifold::square(), 1.0);
  EXPECT_LT(distance_to_loci(loci, {1.0, 1.0}), 0.03);
  EXPECT_GT(distance_to_loci(loci, {-4.0, 0.0}), 0.2);
}

TEST(Loci, SteepFrontKeepsValueAtState) {
  // just inside the unit-circle front the value is flagged but not replaced
  const auto m = Manifold::circle(1.0);
  const auto p = Params::make(1.0, 1.0);
  for (double tau : {1.0, 4.0, 8.0}) {
    const State x = closed_form_state(m, circle_point(0.0079), p, tau);
    const auto r = feedback(m, p, x);
    EXPECT_TRUE(r.discontinuity_flag) << tau;
    EXPECT_NEAR(r.time_to_go, tau, 1e-6) << tau;
  }
}
