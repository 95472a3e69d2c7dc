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

#ifndef GRAPHDIST_DATASET_HPP
#define GRAPHDIST_DATASET_HPP

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "graphdist/environment.hpp"
#include "graphdist/geometry.hpp"
#include "graphdist/kinematics.hpp"

namespace graphdist {

/// One labelled configuration. The label is collision_distance of the arm at
/// `joints` against `obstacles`.
struct Sample {
  char kind = 'a';
  std::uint64_t env_seed = 0;
  PlanarArm arm;
  std::vector<double> joints;
  std::vector<Polygon2d> obstacles;
  double label = 0;

  std::vector<Polygon2d> robot() const { return forward_kinematics(arm, joints); }
};

double label_for(const PlanarArm& arm, std::span<const double> joints, std::span<const Polygon2d> obstacles);

// Seed of the environment used by sample `index` of a (kind, seed) dataset.
// Kinds a and c share one environment across all samples.
std::uint64_t sample_env_seed(char kind, std::uint64_t seed, std::size_t index);

/// Joints uniform in [-pi, pi]^dof; deterministic per (kind, count, seed) and
/// independent of the thread count.
std::vector<Sample> generate_dataset(char kind, std::size_t count, std::uint64_t seed,
                                     const SceneDefaults& defaults = {});

nlohmann::json sample_to_json(const Sample& s);
Sample sample_from_json(const nlohmann::json& j);

// JSON Lines, one sample per line.
void write_dataset(std::ostream& out, const std::vector<Sample>& samples);
void save_dataset(const std::string& path, const std::vector<Sample>& samples);
// Parse errors carry the 1-based line number.
std::vector<Sample> read_dataset(std::istream& in, const std::string& origin = "<stream>");
std::vector<Sample> load_dataset(const std::string& path);

}  // namespace graphdist

#endif  // GRAPHDIST_DATASET_HPP
