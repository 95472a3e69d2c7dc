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

#include "graphdist/trajopt.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>

#include "graphdist/dataset.hpp"
#include "graphdist/parallel.hpp"

namespace graphdist {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kFarDistance = 0.5;
constexpr std::size_t kWaypointShard = 6;
constexpr std::uint64_t kWaypointStream = 0x7770;
constexpr std::uint64_t kTaskStream = 0x7461736b;

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double angle_diff(double to, double from) { return wrap_angle(to - from); }

std::vector<double> row(const Eigen::MatrixXd& m, Eigen::Index r) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = m(r, j);
  return out;
}

// Interpolation along the circular difference, 0 <= s <= 1.
std::vector<double> lerp_row(const Eigen::MatrixXd& m, Eigen::Index r, double s) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    out[static_cast<std::size_t>(j)] = m(r, j) + s * angle_diff(m(r + 1, j), m(r, j));
  return out;
}

struct ShardCost {
  double cost = 0;
  std::vector<double> distances;
  Eigen::MatrixXd gradient;  // rows of this shard
};

ShardCost collision_shard(const Eigen::MatrixXd& w, Eigen::Index first, Eigen::Index last, const Environment& env,
                          const GraphDistNet& net, const PlanConfig& config) {
  ad::Tape tape;
  const model::TapeParams bound = model::bind(tape, net.params(), false);
  const Eigen::Index dof = w.cols();
  const ad::Value obstacle_coords = [&] {
    Eigen::Index rows = 0;
    for (const auto& p : env.obstacles) rows += static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd m(rows, 2);
    Eigen::Index r = 0;
    for (const auto& p : env.obstacles)
      for (std::size_t v = 0; v < p.size(); ++v) m.row(r++) = p.vertex(v).transpose();
    return tape.constant(std::move(m));
  }();

  std::vector<std::vector<ad::Value>> q;
  std::vector<SceneGraph> scenes;
  std::vector<PartnerPair> partners;
  std::vector<ad::Value> coords;
  for (Eigen::Index t = first; t < last; ++t) {
    auto& qt = q.emplace_back();
    for (Eigen::Index j = 0; j < dof; ++j) qt.push_back(tape.variable(w(t, j)));
    const std::vector<double> joints = row(w, t);
    const std::vector<Polygon2d> links = forward_kinematics(env.arm, joints);
    scenes.push_back(make_scene_graph(links, env.obstacles));
    partners.push_back(initial_partners(scenes.back(), derive_seed(config.seed, {kWaypointStream,
                                                                                static_cast<std::uint64_t>(t)})));
    coords.push_back(robot_coords_on_tape(tape, env.arm, qt));
    coords.push_back(obstacle_coords);
  }
  std::vector<const SceneGraph*> ptrs;
  for (const SceneGraph& s : scenes) ptrs.push_back(&s);
  const ad::Value d = model::forward_batch(tape, bound, net.params().config, ptrs, partners, ad::concat_rows(coords));
  const ad::Value cost = ad::sum(distance_cost(d, config));
  tape.backward(cost);

  ShardCost out;
  out.cost = cost.scalar();
  for (Eigen::Index i = 0; i < d.rows(); ++i) out.distances.push_back(d.value()(i, 0));
  out.gradient.resize(last - first, dof);
  for (Eigen::Index t = 0; t < last - first; ++t)
    for (Eigen::Index j = 0; j < dof; ++j)
      out.gradient(t, j) = tape.grad(q[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)])(0, 0);
  return out;
}

}  // namespace

double PlanConfig::effective_threshold() const {
  return threshold >= 0 ? threshold : waypoints * c / (kFarDistance * kFarDistance);
}

void PlanConfig::validate() const {
  if (waypoints < 2) throw ConfigError("waypoints must be at least 2");
  if (!(eps > 0)) throw ConfigError("eps must be positive");
  if (!(c >= 0)) throw ConfigError("c must be non-negative");
  if (!(smoothness >= 0)) throw ConfigError("smoothness must be non-negative");
  if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (densify < 1) throw ConfigError("densify must be at least 1");
  if (!std::isfinite(d_margin)) throw ConfigError("d_margin must be finite");
  adam.validate();
}

PlanConfig PlanConfig::from_config(const KeyValueConfig& kv) {
  static const std::set<std::string> known = {"waypoints", "c",     "eps",   "d_margin", "smoothness", "max_iterations",
                                              "threshold", "lr",    "beta1", "beta2",    "adam_eps",   "seed",
                                              "densify",   "reflect_penetration"};
  for (const auto& [key, value] : kv.values())
    if (!known.count(key)) throw ConfigError("unknown planning config key '" + key + "'");
  PlanConfig p;
  p.waypoints = kv.get_int("waypoints", p.waypoints);
  p.c = kv.get_double("c", p.c);
  p.eps = kv.get_double("eps", p.eps);
  p.d_margin = kv.get_double("d_margin", p.d_margin);
  p.smoothness = kv.get_double("smoothness", p.smoothness);
  p.max_iterations = kv.get_int("max_iterations", p.max_iterations);
  p.threshold = kv.get_double("threshold", p.threshold);
  p.adam.lr = kv.get_double("lr", p.adam.lr);
  p.adam.beta1 = kv.get_double("beta1", p.adam.beta1);
  p.adam.beta2 = kv.get_double("beta2", p.adam.beta2);
  p.adam.eps = kv.get_double("adam_eps", p.adam.eps);
  p.seed = kv.get_uint("seed", p.seed);
  p.densify = kv.get_int("densify", p.densify);
  p.reflect_penetration = kv.get_bool("reflect_penetration", p.reflect_penetration);
  p.validate();
  return p;
}

KeyValueConfig PlanConfig::to_config() const {
  KeyValueConfig kv;
  kv.set("waypoints", std::to_string(waypoints));
  kv.set("c", format_double(c));
  kv.set("eps", format_double(eps));
  kv.set("d_margin", format_double(d_margin));
  kv.set("smoothness", format_double(smoothness));
  kv.set("max_iterations", std::to_string(max_iterations));
  kv.set("threshold", format_double(threshold));
  kv.set("lr", format_double(adam.lr));
  kv.set("beta1", format_double(adam.beta1));
  kv.set("beta2", format_double(adam.beta2));
  kv.set("adam_eps", format_double(adam.eps));
  kv.set("seed", std::to_string(seed));
  kv.set("densify", std::to_string(densify));
  kv.set("reflect_penetration", reflect_penetration ? "true" : "false");
  return kv;
}

double wrap_angle(double a) {
  if (a > -std::numbers::pi && a <= std::numbers::pi) return a;
  double r = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

Trajectory init_trajectory(std::span<const double> start, std::span<const double> goal, int waypoints) {
  if (start.size() != goal.size()) throw DimensionError("init_trajectory: start and goal differ in length");
  if (start.empty()) throw DimensionError("init_trajectory: empty configuration");
  if (waypoints < 2) throw DimensionError("init_trajectory: need at least two waypoints");
  const auto dof = static_cast<Eigen::Index>(start.size());
  Trajectory traj;
  traj.waypoints.resize(waypoints, dof);
  for (Eigen::Index j = 0; j < dof; ++j) {
    const double s = start[static_cast<std::size_t>(j)], g = goal[static_cast<std::size_t>(j)];
    const double delta = angle_diff(g, s);
    traj.waypoints(0, j) = s;
    for (int t = 1; t + 1 < waypoints; ++t)
      traj.waypoints(t, j) = wrap_angle(s + (static_cast<double>(t) / (waypoints - 1)) * delta);
    traj.waypoints(waypoints - 1, j) = g;
  }
  if (!traj.waypoints.allFinite()) throw DimensionError("init_trajectory: non-finite angle");
  return traj;
}

double distance_cost(double d, const PlanConfig& config) {
  const double e = d - config.d_margin;
  const double base = config.c / (e * e + config.eps);
  return config.reflect_penetration && e < 0 ? 2 * config.c / config.eps - base : base;
}

double distance_cost_derivative(double d, const PlanConfig& config) {
  const double e = d - config.d_margin;
  const double den = e * e + config.eps;
  const double base = -2 * config.c * e / (den * den);
  return config.reflect_penetration && e < 0 ? -base : base;
}

ad::Value distance_cost(const ad::Value& d, const PlanConfig& config) {
  const ad::Value base =
      ad::scale(ad::reciprocal(ad::shift(ad::square(ad::shift(d, -config.d_margin)), config.eps)), config.c);
  if (!config.reflect_penetration) return base;
  // Below the margin the cost is mirrored about its peak: 2c/eps - C(d).
  const Eigen::MatrixXd inside = (d.value().array() < config.d_margin).cast<double>().matrix();
  const ad::Value mask = d.tape()->constant(inside);
  return base + mask * (2 * config.c / config.eps - 2 * base);
}

CostTerms trajectory_cost(const Trajectory& traj, const Environment& env, const GraphDistNet& net,
                          const PlanConfig& config) {
  const Eigen::MatrixXd& w = traj.waypoints;
  const Eigen::Index n = w.rows(), dof = w.cols();
  if (n < 2) throw DimensionError("trajectory_cost: need at least two waypoints");
  if (static_cast<std::size_t>(dof) != env.arm.dof()) throw DimensionError("trajectory_cost: joint count mismatch");
  CostTerms out;
  out.gradient = Eigen::MatrixXd::Zero(n, dof);

  // Smoothness on circular differences: the wrap offsets are locally constant.
  for (Eigen::Index t = 0; t + 1 < n; ++t)
    for (Eigen::Index j = 0; j < dof; ++j) {
      const double diff = angle_diff(w(t + 1, j), w(t, j));
      out.smoothness += diff * diff;
      out.gradient(t + 1, j) += 2 * config.smoothness * diff;
      out.gradient(t, j) -= 2 * config.smoothness * diff;
    }
  out.smoothness *= config.smoothness;

  const Eigen::Index interior = n - 2;
  if (!env.obstacles.empty() && interior > 0) {
    const std::size_t shards = (static_cast<std::size_t>(interior) + kWaypointShard - 1) / kWaypointShard;
    std::vector<ShardCost> parts(shards);
    parallel_for(shards, [&](std::size_t s) {
      const Eigen::Index first = 1 + static_cast<Eigen::Index>(s * kWaypointShard);
      const Eigen::Index last = std::min<Eigen::Index>(n - 1, first + static_cast<Eigen::Index>(kWaypointShard));
      parts[s] = collision_shard(w, first, last, env, net, config);
    });
    Eigen::Index r = 1;
    for (const ShardCost& p : parts) {
      out.collision += p.cost;
      out.distances.insert(out.distances.end(), p.distances.begin(), p.distances.end());
      out.gradient.middleRows(r, p.gradient.rows()) += p.gradient;
      r += p.gradient.rows();
    }
  }
  out.gradient.row(0).setZero();
  out.gradient.row(n - 1).setZero();
  out.total = out.collision + out.smoothness;
  return out;
}

PlanResult optimize(const Trajectory& init, const Environment& env, const GraphDistNet& net,
                    const PlanConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index n = init.size(), dof = init.dof();
  PlanResult result;
  result.trajectory = init;
  Eigen::MatrixXd& w = result.trajectory.waypoints;
  const Eigen::Index interior = std::max<Eigen::Index>(0, n - 2);
  Adam<double> adam(interior * dof, config.adam);
  const double threshold = config.effective_threshold();
  PlanReport& report = result.report;

  for (int iter = 0;; ++iter) {
    const CostTerms terms = trajectory_cost(result.trajectory, env, net, config);
    report.cost_trace.push_back(terms.total);
    if (!std::isfinite(terms.total)) {
      std::string trace;
      for (double c : report.cost_trace) trace += " " + format_double(c);
      throw NumericError("trajectory cost is not finite at iteration " + std::to_string(iter) + "; trace:" + trace);
    }
    report.iterations = iter;
    report.final_cost = terms.total;
    report.final_collision_cost = terms.collision;
    if (terms.collision < threshold) {
      report.converged = true;
      break;
    }
    if (iter == config.max_iterations || interior == 0) break;
    Eigen::VectorXd x(interior * dof), g(interior * dof);
    for (Eigen::Index t = 0; t < interior; ++t) {
      x.segment(t * dof, dof) = w.row(t + 1).transpose();
      g.segment(t * dof, dof) = terms.gradient.row(t + 1).transpose();
    }
    adam.step(x, g);
    for (Eigen::Index t = 0; t < interior; ++t) w.row(t + 1) = x.segment(t * dof, dof).transpose();
  }
  for (Eigen::Index t = 1; t + 1 < n; ++t)
    for (Eigen::Index j = 0; j < dof; ++j) w(t, j) = wrap_angle(w(t, j));
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

double path_cost(const Trajectory& traj) {
  const Eigen::MatrixXd& w = traj.waypoints;
  double total = 0;
  for (Eigen::Index t = 0; t + 1 < w.rows(); ++t)
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const double d = angle_diff(w(t + 1, j), w(t, j));
      total += d * d;
    }
  return total;
}

VerifyResult verify(const Trajectory& traj, const Environment& env, int densify) {
  VerifyResult out;
  if (env.obstacles.empty()) return out;
  if (densify < 1) throw ConfigError("verify: densify must be at least 1");
  const Eigen::MatrixXd& w = traj.waypoints;
  const auto check = [&](const std::vector<double>& q, Eigen::Index segment, int step) {
    const double d = label_for(env.arm, q, env.obstacles);
    if (d > 0) return true;
    out.ok = false;
    out.first_violation = Violation{segment, step, d};
    return false;
  };
  for (Eigen::Index t = 0; t < w.rows(); ++t) {
    if (!check(row(w, t), t, 0)) return out;
    if (t + 1 == w.rows()) break;
    for (int k = 1; k < densify; ++k)
      if (!check(lerp_row(w, t, static_cast<double>(k) / densify), t, k)) return out;
  }
  return out;
}

nlohmann::json task_to_json(const PlanTask& task) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [k, v] : task.config.values()) config[k] = v;
  return {{"env", environment_to_json(task.env)}, {"start", task.start}, {"goal", task.goal}, {"config", config}};
}

PlanTask task_from_json(const nlohmann::json& j) {
  try {
    PlanTask task;
    task.env = environment_from_json(j.at("env"));
    task.start = j.at("start").get<std::vector<double>>();
    task.goal = j.at("goal").get<std::vector<double>>();
    if (task.start.size() != task.env.arm.dof() || task.goal.size() != task.env.arm.dof())
      throw FormatError("task start/goal length does not match the arm");
    if (j.contains("config"))
      for (const auto& [k, v] : j.at("config").items()) task.config.set(k, v.is_string() ? v.get<std::string>() : v.dump());
    return task;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed task: ") + e.what());
  }
}

std::vector<PlanTask> generate_tasks(char kind, int count, std::uint64_t seed, double clearance, bool blocked) {
  std::vector<PlanTask> tasks(static_cast<std::size_t>(std::max(0, count)));
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    PlanTask& task = tasks[i];
    task.env = generate_environment(kind, derive_seed(seed, {kTaskStream, i}));
    Rng rng(derive_seed(seed, {kTaskStream, i, 1}));
    const auto draw = [&] {
      std::vector<double> q(task.env.arm.dof());
      for (int attempt = 0;; ++attempt) {
        for (double& v : q) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
        if (task.env.obstacles.empty() || label_for(task.env.arm, q, task.env.obstacles) > clearance) return q;
        if (attempt > 100000) throw PreconditionError("generate_tasks: no configuration with the requested clearance");
      }
    };
    const PlanConfig defaults;
    for (int attempt = 0;; ++attempt) {
      task.start = draw();
      task.goal = draw();
      if (!blocked || task.env.obstacles.empty()) break;
      const Trajectory line = init_trajectory(task.start, task.goal, defaults.waypoints);
      if (!verify(line, task.env, defaults.densify).ok) break;
      if (attempt > 100000) throw PreconditionError("generate_tasks: no blocked start/goal pair found");
    }
  }
  return tasks;
}

nlohmann::json result_to_json(const PlanResult& result, bool success) {
  nlohmann::json waypoints = nlohmann::json::array();
  for (Eigen::Index t = 0; t < result.trajectory.size(); ++t) waypoints.push_back(row(result.trajectory.waypoints, t));
  return {{"waypoints", waypoints},
          {"iterations", result.report.iterations},
          {"final_cost", result.report.final_cost},
          {"path_cost", path_cost(result.trajectory)},
          {"success", success},
          {"converged", result.report.converged},
          {"wall_time_s", result.report.wall_time_s}};
}

void write_trace_csv(std::ostream& out, const PlanReport& report) {
  out << "iteration,cost\n";
  for (std::size_t i = 0; i < report.cost_trace.size(); ++i) out << i << ',' << format_double(report.cost_trace[i]) << '\n';
}

}  // namespace graphdist
