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

#ifndef GRAPHDIST_ENVIRONMENT_HPP
#define GRAPHDIST_ENVIRONMENT_HPP

#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

#include "graphdist/geometry.hpp"
#include "graphdist/kinematics.hpp"
#include "graphdist/random.hpp"

namespace graphdist {

// Scene scale shared by all generated environments.
struct SceneDefaults {
  double workspace_half_extent = 1.0;
  double two_dof_link_length = 0.5;
  double seven_dof_link_length = 0.2;
  double link_width = 0.06;
  double square_side = 0.2;
  // Obstacles keep this clearance from the arm base so the first link is free to move.
  double base_clearance = 0.25;
  int alpha_points = 20;
  int alpha_max_vertices = 15;
  double alpha = 0.6;
  double alpha_shape_size = 0.4;
};

struct Environment {
  char kind = 'a';
  std::uint64_t seed = 0;
  PlanarArm arm;
  std::vector<Polygon2d> obstacles;
  Eigen::AlignedBox2d bounds{Point2<double>(-1, -1), Point2<double>(1, 1)};

  bool inside_bounds(const Polygon2d& p) const;
};

bool is_env_kind(char kind) noexcept;

PlanarArm default_arm(char kind, const SceneDefaults& defaults = {});

/// Deterministic environment of the given kind:
///   a: 2-DoF arm, one fixed square      b: 2-DoF arm, one randomly posed square
///   c: 7-DoF arm, 20 fixed squares      d: 7-DoF arm, 20 randomly posed squares
///   e: 7-DoF arm, 5 random non-convex alpha-shape-like polygons
/// Kinds a and c ignore the seed for obstacle placement.
Environment generate_environment(char kind, std::uint64_t seed, const SceneDefaults& defaults = {});

/// Random simple polygon built from `points` uniform samples: keeps the samples
/// connected to the first one at radius 1/alpha, takes at most `max_vertices`
/// of them, orders them by angle about their centroid and rescales to `size`
/// centred on the origin. Retries until the loop is simple.
Polygon2d random_alpha_polygon(Rng& rng, int points, int max_vertices, double alpha, double size);

nlohmann::json polygon_to_json(const Polygon2d& p);
Polygon2d polygon_from_json(const nlohmann::json& j);
nlohmann::json arm_to_json(const PlanarArm& arm);
PlanarArm arm_from_json(const nlohmann::json& j);
nlohmann::json environment_to_json(const Environment& env);
Environment environment_from_json(const nlohmann::json& j);

}  // namespace graphdist

#endif  // GRAPHDIST_ENVIRONMENT_HPP
