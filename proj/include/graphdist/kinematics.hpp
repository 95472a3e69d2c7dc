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

#ifndef GRAPHDIST_KINEMATICS_HPP
#define GRAPHDIST_KINEMATICS_HPP

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "graphdist/errors.hpp"
#include "graphdist/geometry.hpp"

namespace graphdist {

/// Serial planar arm; every link is drawn as a rectangle from its proximal
/// joint to its distal joint. The arm carries no configuration.
struct PlanarArm {
  std::vector<double> lengths;
  std::vector<double> widths;
  Point2<double> base = Point2<double>::Zero();

  std::size_t dof() const noexcept { return lengths.size(); }
  double reach() const {
    double r = 0;
    for (double l : lengths) r += l;
    return r;
  }

  void validate() const {
    if (lengths.empty()) throw ConfigError("arm needs at least one link");
    if (lengths.size() != widths.size()) throw ConfigError("arm lengths and widths differ in count");
    for (std::size_t i = 0; i < lengths.size(); ++i)
      if (!(lengths[i] > 0) || !(widths[i] > 0)) throw ConfigError("arm link " + std::to_string(i) + " has non-positive size");
    if (!base.allFinite()) throw ConfigError("arm base is not finite");
  }

  friend bool operator==(const PlanarArm&, const PlanarArm&) = default;
};

inline double constant_like(double v, double /*like*/) { return v; }

/// Rectangle corners of every link, counter-clockwise, flattened as
/// (x0, y0, x1, y1, x2, y2, x3, y3). Corners 1 and 2 form the distal edge.
///
/// Generic over the scalar so the same chain runs on doubles and on
/// differentiation-tape values (which must supply sin, cos, +, * and
/// constant_like via ADL).
template <typename Scalar>
std::vector<std::array<Scalar, 8>> link_corners(const PlanarArm& arm, std::span<const Scalar> joints) {
  using std::cos;
  using std::sin;
  if (joints.size() != arm.dof())
    throw DimensionError("expected " + std::to_string(arm.dof()) + " joint angles, got " + std::to_string(joints.size()));
  std::vector<std::array<Scalar, 8>> out;
  out.reserve(arm.dof());
  Scalar phi = joints[0];
  Scalar px = constant_like(arm.base.x(), joints[0]);
  Scalar py = constant_like(arm.base.y(), joints[0]);
  for (std::size_t l = 0; l < arm.dof(); ++l) {
    if (l > 0) phi = phi + joints[l];
    const Scalar c = cos(phi);
    const Scalar s = sin(phi);
    const double len = arm.lengths[l];
    const double h = arm.widths[l] / 2;
    Scalar qx = px + len * c;
    Scalar qy = py + len * s;
    const Scalar hs = h * s;
    const Scalar hc = h * c;
    out.push_back({px + hs, py - hc, qx + hs, qy - hc, qx - hs, qy + hc, px - hs, py + hc});
    px = qx;
    py = qy;
  }
  return out;
}

inline std::vector<Polygon2d> forward_kinematics(const PlanarArm& arm, std::span<const double> joints) {
  for (double q : joints)
    if (!std::isfinite(q)) throw DimensionError("joint angle is not finite");
  std::vector<Polygon2d> links;
  for (const auto& c : link_corners<double>(arm, joints)) {
    links.emplace_back(std::vector<Point2<double>>{{c[0], c[1]}, {c[2], c[3]}, {c[4], c[5]}, {c[6], c[7]}});
  }
  return links;
}

inline std::vector<Polygon2d> forward_kinematics(const PlanarArm& arm, const std::vector<double>& joints) {
  return forward_kinematics(arm, std::span<const double>(joints));
}

}  // namespace graphdist

#endif  // GRAPHDIST_KINEMATICS_HPP
