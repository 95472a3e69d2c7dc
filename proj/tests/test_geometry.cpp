// Copyright 2026 The graphdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "graphdist/environment.hpp"
#include "graphdist/geometry.hpp"
#include "graphdist/kinematics.hpp"
#include "graphdist/autodiff.hpp"
#include "oracles.hpp"

namespace graphdist {
namespace {

using P = Point2<double>;

Polygon2d unit_square(double x, double y = 0) { return Polygon2d::square(P(x, y), 1.0); }

TEST(PolygonTest, RejectsDegenerateInput) {
  EXPECT_THROW(Polygon2d({P(0, 0), P(1, 0)}), InvalidGeometry);
  EXPECT_THROW(Polygon2d({P(0, 0), P(1, 0), P(2, 0)}), InvalidGeometry);
  EXPECT_THROW(Polygon2d({P(0, 0), P(0, 0), P(1, 1)}), InvalidGeometry);
  EXPECT_THROW(Polygon2d({P(0, 0), P(1, 1), P(1, 0), P(0, 1)}), InvalidGeometry);  // bow tie
  EXPECT_THROW(Polygon2d({P(0, 0), P(1, 0), P(std::nan(""), 1)}), InvalidGeometry);
}

TEST(PolygonTest, StoresCounterClockwise) {
  const Polygon2d cw({P(0, 0), P(0, 1), P(1, 1), P(1, 0)});
  EXPECT_GT(cw.signed_area(), 0);
  EXPECT_DOUBLE_EQ(cw.signed_area(), 1.0);
  EXPECT_TRUE(cw.is_convex());
}

TEST(MinDistanceTest, AxisAlignedGap) { EXPECT_DOUBLE_EQ(min_distance(unit_square(0), unit_square(3)), 2.0); }

TEST(MinDistanceTest, IdenticalPolygonsTouch) {
  EXPECT_EQ(min_distance(unit_square(0), unit_square(0)), 0.0);
  EXPECT_EQ(min_distance(unit_square(0), unit_square(1)), 0.0);
}

TEST(MinDistanceTest, NestedPolygonIsZero) {
  EXPECT_EQ(min_distance(unit_square(0), Polygon2d::square(P(0, 0), 0.2)), 0.0);
}

TEST(MinDistanceTest, ConvexOctagonsMatchSamplingOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Polygon2d a = oracle::random_convex(rng, 8, P(0, 0), 1.0);
    const Polygon2d b = oracle::random_convex(rng, 8, P(2.0 + 0.1 * trial, 0.3), 1.0);
    EXPECT_NEAR(min_distance(a, b), oracle::sampled_min_distance(a, b), 1e-3);
  }
}

TEST(MinDistanceTest, SymmetricAndTranslationInvariant) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const Polygon2d a = oracle::random_convex(rng, 6, P(u(rng), u(rng)), 0.8);
    const Polygon2d b = oracle::random_convex(rng, 5, P(u(rng), u(rng)), 0.8);
    EXPECT_EQ(min_distance(a, b), min_distance(b, a));
    const P t(u(rng), u(rng));
    EXPECT_NEAR(min_distance(a.translated(t), b.translated(t)), min_distance(a, b), 1e-12);
  }
}

TEST(PenetrationDepthTest, HalfOverlap) { EXPECT_DOUBLE_EQ(penetration_depth(unit_square(0), unit_square(0.5)), 0.5); }

TEST(PenetrationDepthTest, FullOverlapIsSide) {
  EXPECT_DOUBLE_EQ(penetration_depth(unit_square(0), unit_square(0)), 1.0);
}

TEST(PenetrationDepthTest, SeparatedPairIsPrecondition) {
  EXPECT_THROW(penetration_depth(unit_square(0), unit_square(3)), PreconditionError);
}

TEST(PenetrationDepthTest, ConvexPairsAreExact) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  int checked = 0;
  while (checked < 5) {
    const Polygon2d a = oracle::random_convex(rng, 5, P(0, 0), 1.0);
    const Polygon2d b = oracle::random_convex(rng, 5, P(u(rng), u(rng)), 1.0);
    if (!oracle::interiors_overlap(a, b)) continue;
    const double expected = oracle::directional_penetration(a, b, 720, 1e-12, true);
    EXPECT_NEAR(penetration_depth(a, b), expected, 1e-9);
    ++checked;
  }
}

TEST(PenetrationDepthTest, SymmetricAndTranslationInvariant) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int trial = 0; trial < 100; ++trial) {
    const Polygon2d a = oracle::random_convex(rng, 6, P(0, 0), 0.8);
    const Polygon2d b = oracle::random_convex(rng, 5, P(u(rng), u(rng)), 0.8);
    if (min_distance(a, b) > 0) continue;
    EXPECT_EQ(penetration_depth(a, b), penetration_depth(b, a));
    const P t(3 * u(rng), 3 * u(rng));
    EXPECT_NEAR(penetration_depth(a.translated(t), b.translated(t)), penetration_depth(a, b), 1e-12);
  }
}

TEST(PenetrationDepthTest, NonConvexUsesTrianglePieces) {
  // L-shape overlapping a small square inside its corner block.
  const Polygon2d l({P(0, 0), P(2, 0), P(2, 1), P(1, 1), P(1, 2), P(0, 2)});
  EXPECT_FALSE(l.is_convex());
  const Polygon2d sq = Polygon2d::square(P(0.5, 0.5), 0.4);
  const double depth = penetration_depth(l, sq);
  EXPECT_GT(depth, 0);
  EXPECT_LE(depth, 0.9 + 1e-12);
}

TEST(CollisionDistanceTest, NearestObstacleGoverns) {
  const std::vector<Polygon2d> robot{unit_square(0)};
  EXPECT_DOUBLE_EQ(collision_distance(robot, {unit_square(3), unit_square(5)}), 2.0);
}

TEST(CollisionDistanceTest, NegativeOnOverlap) {
  const std::vector<Polygon2d> robot{unit_square(0)};
  EXPECT_DOUBLE_EQ(collision_distance(robot, {unit_square(0.5), unit_square(10)}), -0.5);
}

TEST(CollisionDistanceTest, RejectsEmptyLists) {
  const std::vector<Polygon2d> none;
  const std::vector<Polygon2d> one{unit_square(0)};
  EXPECT_THROW(collision_distance(none, one), PreconditionError);
  EXPECT_THROW(collision_distance(one, none), PreconditionError);
}

TEST(CollisionDistanceTest, SweepIsContinuousAndCrossesZeroAtContact) {
  const std::vector<Polygon2d> robot{unit_square(0)};
  double previous = collision_distance(robot, {unit_square(2.0)});
  bool crossed = false;
  for (int k = 1; k <= 200; ++k) {
    const double x = 2.0 - 0.01 * k;
    const double d = collision_distance(robot, {unit_square(x)});
    EXPECT_LE(std::abs(d - previous), 2 * 0.01 + 1e-12) << "at x = " << x;
    if (previous > 0 && d <= 0) {
      crossed = true;
      EXPECT_NEAR(x, 1.0, 0.01 + 1e-12);
    }
    // Gap x - 1 while apart; penetration 1 - x along the x axis once overlapping.
    EXPECT_NEAR(d, x - 1.0, 1e-9);
    previous = d;
  }
  EXPECT_TRUE(crossed);
}

TEST(CollisionDistanceTest, SignCoherence) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<Polygon2d> robot{oracle::random_convex(rng, 4, P(0, 0), 0.5)};
    const std::vector<Polygon2d> obstacles{oracle::random_convex(rng, 5, P(u(rng), u(rng)), 0.5),
                                           oracle::random_convex(rng, 5, P(u(rng), u(rng)), 0.5)};
    bool any = false;
    for (const auto& o : obstacles) any = any || min_distance(robot[0], o) == 0;
    const double d = collision_distance(robot, obstacles);
    EXPECT_EQ(d > 0, !any);
  }
}

TEST(CollisionDistanceTest, BoundaryContactIsZero) {
  const std::vector<Polygon2d> robot{unit_square(0)};
  EXPECT_EQ(collision_distance(robot, {unit_square(1.0)}), 0.0);
}

PlanarArm two_link() {
  PlanarArm arm;
  arm.lengths = {1, 1};
  arm.widths = {0.1, 0.1};
  return arm;
}

P distal_midpoint(const std::vector<Polygon2d>& links) {
  const auto& last = links.back();
  return 0.5 * (last.vertex(1) + last.vertex(2));
}

TEST(KinematicsTest, StraightArm) {
  const auto links = forward_kinematics(two_link(), std::vector<double>{0, 0});
  ASSERT_EQ(links.size(), 2u);
  EXPECT_NEAR((distal_midpoint(links) - P(2, 0)).norm(), 0, 1e-15);
}

TEST(KinematicsTest, QuarterTurn) {
  const auto links = forward_kinematics(two_link(), std::vector<double>{std::numbers::pi / 2, 0});
  EXPECT_NEAR((distal_midpoint(links) - P(0, 2)).norm(), 0, 1e-15);
}

TEST(KinematicsTest, WrongJointCount) {
  EXPECT_THROW(forward_kinematics(two_link(), std::vector<double>{0}), DimensionError);
  EXPECT_THROW(forward_kinematics(two_link(), std::vector<double>{0, 0, 0}), DimensionError);
}

TEST(KinematicsTest, TapeDerivativeOfDistalMidpoint) {
  ad::Tape tape;
  std::vector<ad::Value> q{tape.variable(0.0), tape.variable(0.0)};
  const auto corners = link_corners<ad::Value>(two_link(), q);
  const ad::Value y = 0.5 * (corners[1][3] + corners[1][5]);
  tape.backward(y);
  const auto f = [](const Eigen::VectorXd& x) {
    return distal_midpoint(forward_kinematics(two_link(), std::vector<double>{x(0), x(1)})).y();
  };
  const Eigen::VectorXd fd = oracle::central_difference(f, Eigen::Vector2d(0, 0), 1e-6);
  EXPECT_NEAR(tape.grad(q[0])(0, 0), 2.0, 1e-9);
  EXPECT_NEAR(tape.grad(q[0])(0, 0), fd(0), 1e-6);
  EXPECT_NEAR(tape.grad(q[1])(0, 0), fd(1), 1e-6);
}

TEST(KinematicsTest, ChainRuleMatchesFiniteDifferences) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  const PlanarArm arm = default_arm('d');
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd x(7);
    for (Eigen::Index i = 0; i < 7; ++i) x(i) = u(rng);
    const std::size_t link = rng() % 7, coord = rng() % 8;
    ad::Tape tape;
    std::vector<ad::Value> q;
    for (Eigen::Index i = 0; i < 7; ++i) q.push_back(tape.variable(x(i)));
    tape.backward(link_corners<ad::Value>(arm, q)[link][coord]);
    Eigen::VectorXd g(7);
    for (Eigen::Index i = 0; i < 7; ++i) g(i) = tape.grad(q[static_cast<std::size_t>(i)])(0, 0);
    const auto f = [&](const Eigen::VectorXd& v) {
      const std::vector<double> j(v.data(), v.data() + v.size());
      return link_corners<double>(arm, j)[link][coord];
    };
    EXPECT_LT(oracle::relative_error(g, oracle::central_difference(f, x, 1e-6)), 1e-6);
  }
}

TEST(EnvironmentTest, DeterministicPerSeed) {
  EXPECT_EQ(environment_to_json(generate_environment('a', 1)).dump(),
            environment_to_json(generate_environment('a', 1)).dump());
  EXPECT_EQ(environment_to_json(generate_environment('e', 7)).dump(),
            environment_to_json(generate_environment('e', 7)).dump());
}

TEST(EnvironmentTest, KindDHasTwentySquaresInside) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Environment env = generate_environment('d', seed);
    ASSERT_EQ(env.obstacles.size(), 20u);
    EXPECT_EQ(env.arm.dof(), 7u);
    for (const auto& p : env.obstacles) {
      EXPECT_EQ(p.size(), 4u);
      EXPECT_TRUE(p.is_simple());
      EXPECT_TRUE(env.inside_bounds(p));
    }
  }
}

TEST(EnvironmentTest, KindEHasFiveSimpleLoops) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Environment env = generate_environment('e', seed);
    ASSERT_EQ(env.obstacles.size(), 5u);
    for (const auto& p : env.obstacles) {
      EXPECT_LE(p.size(), 15u);
      EXPECT_GE(p.size(), 3u);
      EXPECT_TRUE(p.is_simple());
      EXPECT_TRUE(env.inside_bounds(p));
    }
  }
}

TEST(EnvironmentTest, FixedKindsIgnoreSeed) {
  EXPECT_EQ(generate_environment('a', 1).obstacles, generate_environment('a', 2).obstacles);
  EXPECT_EQ(generate_environment('c', 1).obstacles, generate_environment('c', 2).obstacles);
  EXPECT_NE(generate_environment('b', 1).obstacles, generate_environment('b', 2).obstacles);
  EXPECT_EQ(generate_environment('a', 1).arm.dof(), 2u);
  EXPECT_EQ(generate_environment('c', 1).obstacles.size(), 20u);
}

TEST(EnvironmentTest, UnknownKind) { EXPECT_THROW(generate_environment('z', 1), ConfigError); }

TEST(EnvironmentTest, JsonRoundTrip) {
  const Environment env = generate_environment('e', 3);
  const Environment back = environment_from_json(environment_to_json(env));
  EXPECT_EQ(back.obstacles, env.obstacles);
  EXPECT_EQ(back.arm, env.arm);
  EXPECT_EQ(back.kind, env.kind);
  EXPECT_EQ(back.seed, env.seed);
  EXPECT_THROW(environment_from_json(nlohmann::json::parse(R"({"kind":"a"})")), FormatError);
}

}  // namespace
}  // namespace graphdist
