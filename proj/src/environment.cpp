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

#include "graphdist/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace graphdist {

namespace {

constexpr std::uint64_t kFixedSceneSeed = 0x5eed0fc0ffeeULL;

double distance_to_polygon(const Point2<double>& p, const Polygon2d& poly) {
  if (poly.contains(p)) return 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, point_segment_distance(p, poly.vertex(i), poly.vertex(poly.next(i))));
  return best;
}

// Places `shape` (centred at the origin) uniformly inside the workspace,
// away from the arm base, optionally within a radius band around the base.
Polygon2d place(Rng& rng, const Polygon2d& shape, const Environment& env, double clearance, double max_radius) {
  const Point2<double> lo = env.bounds.min(), hi = env.bounds.max();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Point2<double> c(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()));
    if ((c - env.arm.base).norm() > max_radius) continue;
    Polygon2d p = shape.translated(c);
    if (!env.inside_bounds(p)) continue;
    if (distance_to_polygon(env.arm.base, p) < clearance) continue;
    return p;
  }
  throw ConfigError("could not place obstacle inside the workspace");
}

Polygon2d random_square(Rng& rng, double side) {
  const double angle = rng.uniform(0.0, std::numbers::pi / 2);
  return Polygon2d::square(Point2<double>::Zero(), side, angle);
}

void add_random_squares(Rng& rng, Environment& env, int count, const SceneDefaults& d, double max_radius) {
  for (int i = 0; i < count; ++i)
    env.obstacles.push_back(place(rng, random_square(rng, d.square_side), env, d.base_clearance, max_radius));
}

}  // namespace

bool Environment::inside_bounds(const Polygon2d& p) const {
  return std::all_of(p.vertices().begin(), p.vertices().end(), [this](const Point2<double>& v) {
    return bounds.contains(v);
  });
}

bool is_env_kind(char kind) noexcept { return kind >= 'a' && kind <= 'e'; }

PlanarArm default_arm(char kind, const SceneDefaults& d) {
  if (!is_env_kind(kind)) throw ConfigError(std::string("unknown environment kind '") + kind + "'");
  PlanarArm arm;
  const bool two = kind == 'a' || kind == 'b';
  const std::size_t dof = two ? 2 : 7;
  arm.lengths.assign(dof, two ? d.two_dof_link_length : d.seven_dof_link_length);
  arm.widths.assign(dof, d.link_width);
  return arm;
}

Polygon2d random_alpha_polygon(Rng& rng, int points, int max_vertices, double alpha, double size) {
  using P = Point2<double>;
  const double radius = 1.0 / alpha;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<P> samples;
    for (int i = 0; i < points; ++i) {
      const double x = rng.uniform();
      const double y = rng.uniform();
      samples.emplace_back(x, y);
    }
    // Connected component of the first sample in the radius graph.
    std::vector<bool> reached(samples.size(), false);
    std::vector<std::size_t> frontier{0}, component;
    reached[0] = true;
    while (!frontier.empty()) {
      const std::size_t i = frontier.back();
      frontier.pop_back();
      component.push_back(i);
      for (std::size_t j = 0; j < samples.size(); ++j) {
        if (!reached[j] && (samples[i] - samples[j]).norm() <= radius) {
          reached[j] = true;
          frontier.push_back(j);
        }
      }
    }
    std::sort(component.begin(), component.end());
    if (component.size() > static_cast<std::size_t>(max_vertices)) component.resize(static_cast<std::size_t>(max_vertices));
    if (component.size() < 3) continue;

    std::vector<P> loop;
    P centre = P::Zero();
    for (std::size_t i : component) {
      loop.push_back(samples[i]);
      centre += samples[i];
    }
    centre /= static_cast<double>(loop.size());
    std::sort(loop.begin(), loop.end(), [&](const P& a, const P& b) {
      return std::atan2(a.y() - centre.y(), a.x() - centre.x()) < std::atan2(b.y() - centre.y(), b.x() - centre.x());
    });
    P lo = loop[0], hi = loop[0];
    for (const P& p : loop) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const double extent = (hi - lo).maxCoeff();
    if (!(extent > 0)) continue;
    const P mid = (lo + hi) / 2;
    for (P& p : loop) p = (p - mid) * (size / extent);
    try {
      return Polygon2d(std::move(loop));
    } catch (const InvalidGeometry&) {
      continue;
    }
  }
  throw ConfigError("could not generate a simple alpha-shape polygon");
}

Environment generate_environment(char kind, std::uint64_t seed, const SceneDefaults& d) {
  Environment env;
  env.kind = kind;
  env.seed = seed;
  env.arm = default_arm(kind, d);
  const double w = d.workspace_half_extent;
  env.bounds = Eigen::AlignedBox2d(Point2<double>(-w, -w), Point2<double>(w, w));
  const double unbounded = std::numeric_limits<double>::infinity();
  switch (kind) {
    case 'a':
      env.obstacles.push_back(Polygon2d::square(Point2<double>(0.5, 0.35), d.square_side));
      break;
    case 'b': {
      Rng rng(derive_seed(seed, {'b'}));
      add_random_squares(rng, env, 1, d, env.arm.reach());
      break;
    }
    case 'c': {
      Rng rng(derive_seed(kFixedSceneSeed, {'c'}));
      add_random_squares(rng, env, 20, d, unbounded);
      break;
    }
    case 'd': {
      Rng rng(derive_seed(seed, {'d'}));
      add_random_squares(rng, env, 20, d, unbounded);
      break;
    }
    case 'e': {
      Rng rng(derive_seed(seed, {'e'}));
      for (int i = 0; i < 5; ++i) {
        Polygon2d shape = random_alpha_polygon(rng, d.alpha_points, d.alpha_max_vertices, d.alpha, d.alpha_shape_size);
        env.obstacles.push_back(place(rng, shape, env, d.base_clearance, unbounded));
      }
      break;
    }
    default:
      throw ConfigError(std::string("unknown environment kind '") + kind + "'");
  }
  return env;
}

nlohmann::json polygon_to_json(const Polygon2d& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : p.vertices()) out.push_back({v.x(), v.y()});
  return out;
}

Polygon2d polygon_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("polygon must be an array of [x, y] points");
  std::vector<Point2<double>> pts;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2) throw FormatError("polygon vertex must be [x, y]");
    pts.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  return Polygon2d(std::move(pts));
}

nlohmann::json arm_to_json(const PlanarArm& arm) {
  return {{"dof", arm.dof()}, {"lengths", arm.lengths}, {"widths", arm.widths}, {"base", {arm.base.x(), arm.base.y()}}};
}

PlanarArm arm_from_json(const nlohmann::json& j) {
  PlanarArm arm;
  arm.lengths = j.at("lengths").get<std::vector<double>>();
  arm.widths = j.at("widths").get<std::vector<double>>();
  const auto base = j.at("base").get<std::vector<double>>();
  if (base.size() != 2) throw FormatError("arm base must be [x, y]");
  arm.base = Point2<double>(base[0], base[1]);
  if (j.contains("dof") && j.at("dof").get<std::size_t>() != arm.dof()) throw FormatError("arm dof disagrees with link count");
  arm.validate();
  return arm;
}

nlohmann::json environment_to_json(const Environment& env) {
  nlohmann::json obstacles = nlohmann::json::array();
  for (const auto& p : env.obstacles) obstacles.push_back(polygon_to_json(p));
  return {{"kind", std::string(1, env.kind)},
          {"seed", env.seed},
          {"arm", arm_to_json(env.arm)},
          {"obstacles", obstacles},
          {"workspace", {env.bounds.min().x(), env.bounds.min().y(), env.bounds.max().x(), env.bounds.max().y()}}};
}

Environment environment_from_json(const nlohmann::json& j) {
  try {
    Environment env;
    const auto kind = j.at("kind").get<std::string>();
    if (kind.size() != 1) throw FormatError("environment kind must be a single letter");
    env.kind = kind[0];
    env.seed = j.value("seed", std::uint64_t{0});
    env.arm = arm_from_json(j.at("arm"));
    for (const auto& p : j.at("obstacles")) env.obstacles.push_back(polygon_from_json(p));
    if (j.contains("workspace")) {
      const auto w = j.at("workspace").get<std::vector<double>>();
      if (w.size() != 4) throw FormatError("workspace must be [xmin, ymin, xmax, ymax]");
      env.bounds = Eigen::AlignedBox2d(Point2<double>(w[0], w[1]), Point2<double>(w[2], w[3]));
    }
    return env;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed environment: ") + e.what());
  }
}

}  // namespace graphdist
