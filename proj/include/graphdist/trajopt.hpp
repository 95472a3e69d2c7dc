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

#ifndef GRAPHDIST_TRAJOPT_HPP
#define GRAPHDIST_TRAJOPT_HPP

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "graphdist/autodiff.hpp"
#include "graphdist/config.hpp"
#include "graphdist/environment.hpp"
#include "graphdist/model.hpp"
#include "graphdist/optimizer.hpp"

namespace graphdist {

struct PlanConfig {
  int waypoints = 20;
  double c = 1e-3;
  double eps = 1e-4;
  double d_margin = 0.02;
  double smoothness = 0.1;
  int max_iterations = 500;
  // Stop once the collision term falls below this; negative selects
  // waypoints * c / d_far^2 with d_far = 0.5.
  double threshold = -1;
  AdamConfig adam{0.02, 0.9, 0.999, 1e-8};
  std::uint64_t seed = 0;
  int densify = 10;
  // Mirror C(d) about its peak for d < d_margin so that penetrating waypoints
  // are pushed out instead of deeper. Off by default.
  bool reflect_penetration = false;

  double effective_threshold() const;
  void validate() const;
  static PlanConfig from_config(const KeyValueConfig& kv);
  KeyValueConfig to_config() const;
};

/// T x dof waypoint matrix; rows 0 and T-1 are the fixed endpoints.
struct Trajectory {
  Eigen::MatrixXd waypoints;

  Eigen::Index size() const noexcept { return waypoints.rows(); }
  Eigen::Index dof() const noexcept { return waypoints.cols(); }
};

// Wraps to (-pi, pi]; values already in range are returned unchanged.
double wrap_angle(double a);

/// Linear interpolation along the shorter angular direction of each joint.
/// The last row equals `goal` exactly.
Trajectory init_trajectory(std::span<const double> start, std::span<const double> goal, int waypoints);

// C(d) = c / ((d - d_margin)^2 + eps).
double distance_cost(double d, const PlanConfig& config);
double distance_cost_derivative(double d, const PlanConfig& config);
ad::Value distance_cost(const ad::Value& d, const PlanConfig& config);

struct CostTerms {
  double total = 0;
  double collision = 0;
  double smoothness = 0;
  Eigen::MatrixXd gradient;  // same shape as the waypoints; endpoint rows zero
  std::vector<double> distances;  // d-hat per interior waypoint
};

/// Sum of C(d-hat) over interior waypoints plus smoothness * sum_t |dtheta_t|^2,
/// with its gradient w.r.t. every waypoint. Waypoint t uses the initial-partner
/// seed derived from (config.seed, t).
CostTerms trajectory_cost(const Trajectory& traj, const Environment& env, const GraphDistNet& net,
                          const PlanConfig& config);

struct PlanReport {
  int iterations = 0;
  double final_cost = 0;
  double final_collision_cost = 0;
  double wall_time_s = 0;
  bool converged = false;
  std::vector<double> cost_trace;  // cost before each update, then the final cost
};

struct PlanResult {
  Trajectory trajectory;  // angles wrapped to (-pi, pi]
  PlanReport report;
};

/// Adam on the interior waypoints; endpoints never move. Throws NumericError
/// (with the cost trace so far) when the cost becomes non-finite.
PlanResult optimize(const Trajectory& init, const Environment& env, const GraphDistNet& net, const PlanConfig& config);

// sum_t |theta_{t+1} - theta_t|^2 with per-joint differences taken on the circle.
double path_cost(const Trajectory& traj);

struct Violation {
  Eigen::Index segment = 0;  // waypoints segment, segment + 1
  int step = 0;              // 0 = at waypoint `segment`, k = k/densify along the segment
  double distance = 0;
};

struct VerifyResult {
  bool ok = true;
  std::optional<Violation> first_violation;
};

/// Exact check: collision_distance > 0 at every waypoint and at `densify`
/// subdivisions of each segment.
VerifyResult verify(const Trajectory& traj, const Environment& env, int densify = 10);

struct PlanTask {
  Environment env;
  std::vector<double> start;
  std::vector<double> goal;
  KeyValueConfig config;
};

nlohmann::json task_to_json(const PlanTask& task);
PlanTask task_from_json(const nlohmann::json& j);

/// `count` reaching tasks in environments of `kind`: start and goal drawn
/// uniformly and kept only when their exact distance exceeds `clearance`.
/// With `blocked`, pairs are redrawn until the straight-line initialization
/// collides somewhere, so every task needs an actual detour.
std::vector<PlanTask> generate_tasks(char kind, int count, std::uint64_t seed, double clearance,
                                     bool blocked = false);

nlohmann::json result_to_json(const PlanResult& result, bool success);
void write_trace_csv(std::ostream& out, const PlanReport& report);

}  // namespace graphdist

#endif  // GRAPHDIST_TRAJOPT_HPP
