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
#include <sstream>

#include "graphdist/dataset.hpp"
#include "graphdist/trajopt.hpp"
#include "oracles.hpp"

namespace graphdist {
namespace {

constexpr double kPi = std::numbers::pi;

// Zero attention gives uniform scores, so every argmax is the first node and
// partner selection cannot flip under small perturbations.
GraphDistNet fixed_partner_net(std::uint64_t seed) {
  ModelParams p = ModelParams::initialize(ModelConfig{}, seed);
  for (auto& a : p.attention) a.setZero();
  return GraphDistNet(p);
}

Environment one_square_env() {
  Environment env = generate_environment('a', 0);
  env.obstacles = {Polygon2d::square(Point2<double>(0.5, 0.35), 0.2)};
  return env;
}

TEST(WrapAngleTest, RangeAndIdentity) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.3), 0.3);
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-12);
  for (double a = -20; a < 20; a += 0.37) {
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(a - w, 2 * kPi), 0.0, 1e-9);
  }
}

TEST(InitTrajectoryTest, Examples) {
  const std::vector<double> s{0.2, -1.0}, g{1.0, 1.0};
  const Trajectory same = init_trajectory(s, s, 5);
  for (Eigen::Index t = 0; t < 5; ++t) EXPECT_EQ(same.waypoints.row(t), same.waypoints.row(0));
  const Trajectory two = init_trajectory(s, g, 2);
  ASSERT_EQ(two.size(), 2);
  EXPECT_EQ(two.waypoints(0, 0), 0.2);
  EXPECT_EQ(two.waypoints(1, 1), 1.0);
  const std::vector<double> zero{0, 0}, one{1, 1};
  const Trajectory three = init_trajectory(zero, one, 3);
  EXPECT_NEAR(three.waypoints(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(three.waypoints(1, 1), 0.5, 1e-15);
  EXPECT_THROW(init_trajectory(zero, std::vector<double>{1}, 3), DimensionError);
}

TEST(InitTrajectoryTest, TakesShorterDirection) {
  const std::vector<double> s{3.0}, g{-3.0};
  const Trajectory t = init_trajectory(s, g, 3);
  // Going through pi is 2pi - 6 long; the midpoint sits at pi.
  EXPECT_NEAR(std::abs(t.waypoints(1, 0)), kPi, 1e-12);
  EXPECT_EQ(t.waypoints(2, 0), -3.0);
  EXPECT_NEAR(path_cost(t), 2 * std::pow((2 * kPi - 6) / 2, 2), 1e-12);
}

TEST(PathCostTest, Examples) {
  Trajectory c{Eigen::MatrixXd::Constant(4, 3, 0.7)};
  EXPECT_EQ(path_cost(c), 0.0);
  Trajectory two{Eigen::MatrixXd(2, 2)};
  two.waypoints << 0, 0, 0.3, -0.4;
  EXPECT_NEAR(path_cost(two), 0.25, 1e-15);
}

TEST(DistanceCostTest, PeakAndShape) {
  const PlanConfig c;
  EXPECT_DOUBLE_EQ(distance_cost(c.d_margin, c), c.c / c.eps);
  double previous = distance_cost(c.d_margin, c);
  for (double d = c.d_margin + 0.01; d < 2; d += 0.01) {
    const double v = distance_cost(d, c);
    EXPECT_LT(v, previous);
    previous = v;
  }
  EXPECT_NEAR(distance_cost(c.d_margin + 0.5, c), c.c / (0.25 + c.eps), 1e-15);
}

TEST(DistanceCostTest, DerivativeMatchesTape) {
  const PlanConfig c;
  for (double d = -0.3; d < 0.5; d += 0.0137) {
    ad::Tape tape;
    const ad::Value x = tape.variable(Eigen::MatrixXd::Constant(1, 1, d));
    const ad::Value y = distance_cost(x, c);
    EXPECT_DOUBLE_EQ(y.value()(0, 0), distance_cost(d, c));
    tape.backward(y);
    const double analytic = distance_cost_derivative(d, c);
    EXPECT_LE(std::abs(tape.grad(x)(0, 0) - analytic), 1e-10 * std::max(1.0, std::abs(analytic)));
    const double h = 1e-7;
    const double fd = (distance_cost(d + h, c) - distance_cost(d - h, c)) / (2 * h);
    EXPECT_LT(std::abs(fd - analytic), 1e-5 * std::max(1.0, std::abs(analytic)));
  }
}

TEST(DistanceCostTest, ReflectedVariantIsContinuousAndPushesOut) {
  PlanConfig c;
  c.reflect_penetration = true;
  const double peak = c.c / c.eps;
  EXPECT_DOUBLE_EQ(distance_cost(c.d_margin, c), peak);
  EXPECT_NEAR(distance_cost(c.d_margin - 1e-9, c), peak, 1e-6);
  for (double d = -0.3; d < c.d_margin; d += 0.01) {
    EXPECT_GT(distance_cost(d, c), peak);
    EXPECT_LT(distance_cost_derivative(d, c), 0.0);
    PlanConfig plain;
    EXPECT_NEAR(distance_cost(d, c), 2 * peak - distance_cost(d, plain), 1e-9);
  }
  for (double d = -0.3; d < 0.5; d += 0.0137) {
    ad::Tape tape;
    const ad::Value x = tape.variable(Eigen::MatrixXd::Constant(1, 1, d));
    const ad::Value y = distance_cost(x, c);
    EXPECT_NEAR(y.value()(0, 0), distance_cost(d, c), 1e-12 * peak);
    tape.backward(y);
    const double analytic = distance_cost_derivative(d, c);
    EXPECT_LE(std::abs(tape.grad(x)(0, 0) - analytic), 1e-10 * std::max(1.0, std::abs(analytic)));
  }
}

TEST(PlanConfigTest, ValidationAndParsing) {
  PlanConfig c;
  EXPECT_NEAR(c.effective_threshold(), 20 * 1e-3 / 0.25, 1e-15);
  c.eps = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = PlanConfig{};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  const PlanConfig p = PlanConfig::from_config(KeyValueConfig::parse("waypoints = 8\nlr = 0.05\nthreshold = 0.5\n"));
  EXPECT_EQ(p.waypoints, 8);
  EXPECT_DOUBLE_EQ(p.adam.lr, 0.05);
  EXPECT_DOUBLE_EQ(p.effective_threshold(), 0.5);
  EXPECT_THROW(PlanConfig::from_config(KeyValueConfig::parse("step = 1\n")), ConfigError);
  EXPECT_FALSE(p.reflect_penetration);
  EXPECT_TRUE(PlanConfig::from_config(KeyValueConfig::parse("reflect_penetration = true\n")).reflect_penetration);
}

TEST(TrajectoryCostTest, GradientMatchesFiniteDifferences) {
  const Environment env = one_square_env();
  const GraphDistNet net = fixed_partner_net(31);
  PlanConfig config;
  config.waypoints = 6;
  const std::vector<double> s{-2.0, 0.5}, g{1.2, -0.7};
  const Trajectory traj = init_trajectory(s, g, config.waypoints);
  const CostTerms terms = trajectory_cost(traj, env, net, config);
  ASSERT_EQ(terms.distances.size(), 4u);
  EXPECT_NEAR(terms.total, terms.collision + terms.smoothness, 1e-15);
  double collision = 0;
  for (double d : terms.distances) collision += distance_cost(d, config);
  EXPECT_NEAR(terms.collision, collision, 1e-12 * collision);
  EXPECT_TRUE(terms.gradient.row(0).isZero());
  EXPECT_TRUE(terms.gradient.row(5).isZero());

  const Eigen::Index rows = traj.size() - 2, dof = traj.dof();
  Eigen::VectorXd x(rows * dof), analytic(rows * dof);
  for (Eigen::Index t = 0; t < rows; ++t) {
    x.segment(t * dof, dof) = traj.waypoints.row(t + 1).transpose();
    analytic.segment(t * dof, dof) = terms.gradient.row(t + 1).transpose();
  }
  const auto f = [&](const Eigen::VectorXd& v) {
    Trajectory p = traj;
    for (Eigen::Index t = 0; t < rows; ++t) p.waypoints.row(t + 1) = v.segment(t * dof, dof).transpose();
    return trajectory_cost(p, env, net, config).total;
  };
  EXPECT_LT(oracle::relative_error(analytic, oracle::central_difference(f, x, 1e-6)), 1e-4);
}

TEST(OptimizeTest, ObstacleFreeKeepsTheLinearPath) {
  Environment env = one_square_env();
  env.obstacles.clear();
  const GraphDistNet net = fixed_partner_net(32);
  const PlanConfig config;
  const Trajectory init = init_trajectory(std::vector<double>{-1, 2}, std::vector<double>{2.5, -0.5}, 20);
  const PlanResult r = optimize(init, env, net, config);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(std::abs(path_cost(r.trajectory) - path_cost(init)), 0.01 * path_cost(init));
  EXPECT_TRUE(verify(r.trajectory, env).ok);
}

TEST(OptimizeTest, EndpointsPinnedAndDeterministic) {
  const Environment env = one_square_env();
  const GraphDistNet net = fixed_partner_net(33);
  PlanConfig config;
  config.waypoints = 8;
  config.max_iterations = 25;
  config.threshold = 0;  // run the full budget
  const std::vector<double> s{-2.9, 0.4}, g{1.0, 0.2};
  const Trajectory init = init_trajectory(s, g, config.waypoints);
  const PlanResult a = optimize(init, env, net, config);
  const PlanResult b = optimize(init, env, net, config);
  EXPECT_EQ(a.trajectory.waypoints, b.trajectory.waypoints);
  EXPECT_EQ(a.report.cost_trace, b.report.cost_trace);
  EXPECT_EQ(a.trajectory.waypoints.row(0), init.waypoints.row(0));
  EXPECT_EQ(a.trajectory.waypoints.row(7), init.waypoints.row(7));
  EXPECT_EQ(a.report.iterations, 25);
  ASSERT_EQ(a.report.cost_trace.size(), 26u);
  double best = a.report.cost_trace.front();
  for (double c : a.report.cost_trace) {
    const double next = std::min(best, c);
    EXPECT_LE(next, best);
    best = next;
  }
  for (Eigen::Index i = 0; i < a.trajectory.waypoints.size(); ++i) {
    EXPECT_GT(a.trajectory.waypoints(i), -kPi);
    EXPECT_LE(a.trajectory.waypoints(i), kPi);
  }
}

TEST(VerifyTest, PlantedViolations) {
  const Environment env = one_square_env();
  // Joint 0 at atan2(0.35, 0.5) points the first link straight at the square.
  const double aim = std::atan2(0.35, 0.5);
  Trajectory clear{Eigen::MatrixXd(3, 2)};
  clear.waypoints << aim + 1.5, 0, aim + 2.0, 0, aim + 2.5, 0;
  ASSERT_GT(label_for(env.arm, std::vector<double>{aim + 1.5, 0}, env.obstacles), 0);
  EXPECT_TRUE(verify(clear, env).ok);

  Trajectory through{Eigen::MatrixXd(3, 2)};
  through.waypoints << aim + 1.0, 0, aim + 0.6, 0, aim - 0.6, 0;
  ASSERT_GT(label_for(env.arm, std::vector<double>{aim + 0.6, 0}, env.obstacles), 0);
  ASSERT_GT(label_for(env.arm, std::vector<double>{aim - 0.6, 0}, env.obstacles), 0);
  const VerifyResult v = verify(through, env);
  EXPECT_FALSE(v.ok);
  ASSERT_TRUE(v.first_violation.has_value());
  EXPECT_EQ(v.first_violation->segment, 1);
  EXPECT_GT(v.first_violation->step, 0);
  EXPECT_LE(v.first_violation->distance, 0);

  Trajectory at_waypoint = through;
  at_waypoint.waypoints(0, 0) = aim;
  const VerifyResult w = verify(at_waypoint, env);
  ASSERT_TRUE(w.first_violation.has_value());
  EXPECT_EQ(w.first_violation->segment, 0);
  EXPECT_EQ(w.first_violation->step, 0);

  Environment empty = env;
  empty.obstacles.clear();
  EXPECT_TRUE(verify(through, empty).ok);
}

TEST(TaskTest, GenerationAndJsonRoundTrip) {
  const auto tasks = generate_tasks('b', 5, 40, 0.05);
  ASSERT_EQ(tasks.size(), 5u);
  for (const PlanTask& t : tasks) {
    EXPECT_GT(label_for(t.env.arm, t.start, t.env.obstacles), 0.05);
    EXPECT_GT(label_for(t.env.arm, t.goal, t.env.obstacles), 0.05);
    const PlanTask back = task_from_json(nlohmann::json::parse(task_to_json(t).dump()));
    EXPECT_EQ(back.start, t.start);
    EXPECT_EQ(back.goal, t.goal);
    EXPECT_EQ(back.env.obstacles.size(), t.env.obstacles.size());
  }
  const auto again = generate_tasks('b', 5, 40, 0.05);
  EXPECT_EQ(again[3].start, tasks[3].start);
  const PlanConfig defaults;
  for (const PlanTask& t : generate_tasks('b', 4, 41, 0.05, true))
    EXPECT_FALSE(verify(init_trajectory(t.start, t.goal, defaults.waypoints), t.env, defaults.densify).ok);
}

TEST(ResultTest, JsonAndTrace) {
  PlanResult r;
  r.trajectory.waypoints = Eigen::MatrixXd::Zero(3, 2);
  r.report.iterations = 2;
  r.report.cost_trace = {3, 2, 1};
  const nlohmann::json j = result_to_json(r, true);
  for (const char* key : {"waypoints", "iterations", "final_cost", "path_cost", "success", "wall_time_s"})
    EXPECT_TRUE(j.contains(key)) << key;
  std::ostringstream out;
  write_trace_csv(out, r.report);
  EXPECT_EQ(out.str(), "iteration,cost\n0,3\n1,2\n2,1\n");
}

}  // namespace
}  // namespace graphdist
