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

#include "graphdist/dataset.hpp"

#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>

#include "graphdist/parallel.hpp"

namespace graphdist {

namespace {

constexpr std::uint64_t kJointStream = 0x6a6f696e;
constexpr std::uint64_t kEnvStream = 0x656e76;

bool shared_environment(char kind) { return kind == 'a' || kind == 'c'; }

}  // namespace

double label_for(const PlanarArm& arm, std::span<const double> joints, std::span<const Polygon2d> obstacles) {
  const std::vector<Polygon2d> links = forward_kinematics(arm, joints);
  return collision_distance(std::span<const Polygon2d>(links), obstacles);
}

std::uint64_t sample_env_seed(char kind, std::uint64_t seed, std::size_t index) {
  if (!is_env_kind(kind)) throw ConfigError(std::string("unknown environment kind '") + kind + "'");
  if (shared_environment(kind)) return derive_seed(seed, {kEnvStream});
  return derive_seed(seed, {kEnvStream, index});
}

std::vector<Sample> generate_dataset(char kind, std::size_t count, std::uint64_t seed, const SceneDefaults& defaults) {
  if (!is_env_kind(kind)) throw ConfigError(std::string("unknown environment kind '") + kind + "'");
  std::vector<Sample> out(count);
  if (count == 0) return out;
  Environment shared;
  if (shared_environment(kind)) shared = generate_environment(kind, sample_env_seed(kind, seed, 0), defaults);
  parallel_for(count, [&](std::size_t i) {
    Sample& s = out[i];
    s.kind = kind;
    s.env_seed = sample_env_seed(kind, seed, i);
    const Environment env = shared_environment(kind) ? shared : generate_environment(kind, s.env_seed, defaults);
    s.arm = env.arm;
    s.obstacles = env.obstacles;
    Rng rng(derive_seed(seed, {kJointStream, i}));
    s.joints.resize(env.arm.dof());
    for (double& q : s.joints) q = rng.uniform(-std::numbers::pi, std::numbers::pi);
    s.label = label_for(s.arm, s.joints, s.obstacles);
  });
  return out;
}

nlohmann::json sample_to_json(const Sample& s) {
  nlohmann::json obstacles = nlohmann::json::array();
  for (const auto& p : s.obstacles) obstacles.push_back(polygon_to_json(p));
  return {{"kind", std::string(1, s.kind)}, {"env_seed", s.env_seed}, {"arm", arm_to_json(s.arm)},
          {"joints", s.joints},             {"obstacles", obstacles},  {"label", s.label}};
}

Sample sample_from_json(const nlohmann::json& j) {
  try {
    Sample s;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind.size() != 1 || !is_env_kind(kind[0])) throw FormatError("unknown environment kind '" + kind + "'");
    s.kind = kind[0];
    s.env_seed = j.at("env_seed").get<std::uint64_t>();
    s.arm = arm_from_json(j.at("arm"));
    s.joints = j.at("joints").get<std::vector<double>>();
    if (s.joints.size() != s.arm.dof()) throw FormatError("joint count does not match the arm");
    for (const auto& p : j.at("obstacles")) s.obstacles.push_back(polygon_from_json(p));
    if (s.obstacles.empty()) throw FormatError("sample has no obstacles");
    s.label = j.at("label").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed sample: ") + e.what());
  } catch (const InvalidGeometry& e) {
    throw FormatError(std::string("invalid obstacle: ") + e.what());
  }
}

void write_dataset(std::ostream& out, const std::vector<Sample>& samples) {
  for (const Sample& s : samples) out << sample_to_json(s).dump() << '\n';
}

void save_dataset(const std::string& path, const std::vector<Sample>& samples) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset " + path);
  write_dataset(out, samples);
  if (!out) throw IoError("failed writing dataset " + path);
}

std::vector<Sample> read_dataset(std::istream& in, const std::string& origin) {
  std::vector<Sample> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(sample_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(origin + ":" + std::to_string(number) + ": " + e.what());
    } catch (const Error& e) {
      throw FormatError(origin + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Sample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path);
  return read_dataset(in, path);
}

}  // namespace graphdist
