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

#ifndef GRAPHDIST_GEOMETRY_HPP
#define GRAPHDIST_GEOMETRY_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphdist/errors.hpp"

namespace graphdist {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

// Twice the signed area of triangle (a, b, c); positive for a left turn.
template <typename Scalar>
Scalar orient(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

template <typename Scalar>
bool on_segment(const Point2<Scalar>& p, const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

// Closed segments [p1,p2] and [q1,q2] share at least one point.
template <typename Scalar>
bool segments_intersect(const Point2<Scalar>& p1, const Point2<Scalar>& p2, const Point2<Scalar>& q1,
                        const Point2<Scalar>& q2) {
  const Scalar d1 = orient(q1, q2, p1);
  const Scalar d2 = orient(q1, q2, p2);
  const Scalar d3 = orient(p1, p2, q1);
  const Scalar d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(p1, q1, q2)) return true;
  if (d2 == 0 && on_segment(p2, q1, q2)) return true;
  if (d3 == 0 && on_segment(q1, p1, p2)) return true;
  if (d4 == 0 && on_segment(q2, p1, p2)) return true;
  return false;
}

template <typename Scalar>
Scalar point_segment_distance(const Point2<Scalar>& p, const Point2<Scalar>& a, const Point2<Scalar>& b) {
  const Point2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  Scalar t = len2 > 0 ? (p - a).dot(ab) / len2 : Scalar(0);
  t = std::clamp(t, Scalar(0), Scalar(1));
  return (a + t * ab - p).norm();
}

// Symmetric under swapping the two segments.
template <typename Scalar>
Scalar segment_distance(const Point2<Scalar>& p1, const Point2<Scalar>& p2, const Point2<Scalar>& q1,
                        const Point2<Scalar>& q2) {
  if (segments_intersect(p1, p2, q1, q2)) return Scalar(0);
  return std::min(std::min(point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2)),
                  std::min(point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2)));
}

/// Closed simple polygon stored counter-clockwise.
///
/// Construction validates the vertex loop (at least three vertices, distinct
/// consecutive vertices, no self-intersection, non-zero area) and reverses
/// clockwise input. Invalid input raises InvalidGeometry.
template <typename Scalar>
class Polygon {
  static_assert(std::is_floating_point_v<Scalar>, "Polygon requires a floating-point scalar");

 public:
  using Point = Point2<Scalar>;

  Polygon() = default;

  explicit Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw InvalidGeometry("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!vertices_[i].allFinite()) throw InvalidGeometry("polygon vertex is not finite");
      if ((vertices_[i] - vertices_[next(i)]).norm() <= Scalar(1e-12))
        throw InvalidGeometry("polygon has coincident consecutive vertices at index " + std::to_string(i));
    }
    Scalar area = signed_area();
    if (!(std::abs(area) > Scalar(0))) throw InvalidGeometry("polygon has zero area");
    if (area < 0) std::reverse(vertices_.begin(), vertices_.end());
    if (!is_simple()) throw InvalidGeometry("polygon is self-intersecting");
  }

  static Polygon rectangle(const Point& center, Scalar width, Scalar height, Scalar angle = 0) {
    const Scalar c = std::cos(angle), s = std::sin(angle);
    const Point u(c * width / 2, s * width / 2), v(-s * height / 2, c * height / 2);
    return Polygon({center - u - v, center + u - v, center + u + v, center - u + v});
  }

  static Polygon square(const Point& center, Scalar side, Scalar angle = 0) {
    return rectangle(center, side, side, angle);
  }

  std::size_t size() const noexcept { return vertices_.size(); }
  const Point& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  std::size_t next(std::size_t i) const noexcept { return i + 1 == vertices_.size() ? 0 : i + 1; }
  std::size_t prev(std::size_t i) const noexcept { return i == 0 ? vertices_.size() - 1 : i - 1; }

  Scalar signed_area() const {
    Scalar a = 0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Point& p = vertices_[i];
      const Point& q = vertices_[next(i)];
      a += p.x() * q.y() - q.x() * p.y();
    }
    return a / 2;
  }

  Point centroid() const {
    Point c = Point::Zero();
    for (const Point& p : vertices_) c += p;
    return c / static_cast<Scalar>(vertices_.size());
  }

  bool is_convex() const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (orient(vertices_[prev(i)], vertices_[i], vertices_[next(i)]) < 0) return false;
    return true;
  }

  bool is_simple() const {
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        if (segments_intersect(vertices_[i], vertices_[next(i)], vertices_[j], vertices_[next(j)])) return false;
      }
    }
    return true;
  }

  // Inclusive of the boundary.
  bool contains(const Point& p) const {
    const std::size_t n = vertices_.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = vertices_[i];
      const Point& b = vertices_[j];
      if (orient(a, b, p) == 0 && on_segment(p, a, b)) return true;
      if ((a.y() > p.y()) != (b.y() > p.y())) {
        const Scalar x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
        if (p.x() < x) inside = !inside;
      }
    }
    return inside;
  }

  Polygon translated(const Point& t) const {
    Polygon out = *this;
    for (Point& p : out.vertices_) p += t;
    return out;
  }

  friend bool operator==(const Polygon& a, const Polygon& b) { return a.vertices_ == b.vertices_; }

 private:
  std::vector<Point> vertices_;
};

using Polygon2d = Polygon<double>;

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
template <typename Scalar>
std::vector<Polygon<Scalar>> triangulate(const Polygon<Scalar>& poly) {
  using Point = Point2<Scalar>;
  std::vector<std::size_t> idx(poly.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<Polygon<Scalar>> tris;
  auto inside_tri = [](const Point& p, const Point& a, const Point& b, const Point& c) {
    return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
  };
  while (idx.size() > 3) {
    bool clipped = false;
    const std::size_t m = idx.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Point& a = poly.vertex(idx[(k + m - 1) % m]);
      const Point& b = poly.vertex(idx[k]);
      const Point& c = poly.vertex(idx[(k + 1) % m]);
      if (orient(a, b, c) <= 0) continue;
      bool ear = true;
      for (std::size_t q = 0; q < m && ear; ++q) {
        if (q == k || q == (k + m - 1) % m || q == (k + 1) % m) continue;
        const Point& p = poly.vertex(idx[q]);
        if (p == a || p == b || p == c) continue;
        if (inside_tri(p, a, b, c)) ear = false;
      }
      if (!ear) continue;
      tris.emplace_back(std::vector<Point>{a, b, c});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
      clipped = true;
      break;
    }
    if (!clipped) throw InvalidGeometry("ear clipping failed; polygon is degenerate");
  }
  tris.emplace_back(std::vector<Point>{poly.vertex(idx[0]), poly.vertex(idx[1]), poly.vertex(idx[2])});
  return tris;
}

// Convex pieces used for penetration queries: the polygon itself when convex,
// otherwise its ear-clip triangles.
template <typename Scalar>
std::vector<Polygon<Scalar>> convex_pieces(const Polygon<Scalar>& poly) {
  if (poly.is_convex()) return {poly};
  return triangulate(poly);
}

/// Minimum Euclidean distance between two polygons (0 when touching or
/// overlapping, including full containment).
template <typename Scalar>
Scalar min_distance(const Polygon<Scalar>& a, const Polygon<Scalar>& b) {
  if (a.contains(b.vertex(0)) || b.contains(a.vertex(0))) return Scalar(0);
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      best = std::min(best, segment_distance(a.vertex(i), a.vertex(a.next(i)), b.vertex(j), b.vertex(b.next(j))));
      if (best == 0) return best;
    }
  }
  return best;
}

namespace detail {

template <typename Scalar>
void project(const Polygon<Scalar>& p, const Point2<Scalar>& axis, Scalar& lo, Scalar& hi) {
  lo = std::numeric_limits<Scalar>::infinity();
  hi = -lo;
  for (const auto& v : p.vertices()) {
    const Scalar s = v.dot(axis);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
}

template <typename Scalar>
void min_overlap_over_edges(const Polygon<Scalar>& edges_of, const Polygon<Scalar>& a, const Polygon<Scalar>& b,
                            Scalar& depth) {
  for (std::size_t i = 0; i < edges_of.size(); ++i) {
    const Point2<Scalar> e = edges_of.vertex(edges_of.next(i)) - edges_of.vertex(i);
    const Point2<Scalar> axis = Point2<Scalar>(-e.y(), e.x()) / e.norm();
    Scalar alo, ahi, blo, bhi;
    project(a, axis, alo, ahi);
    project(b, axis, blo, bhi);
    depth = std::min(depth, std::min(ahi - blo, bhi - alo));
  }
}

}  // namespace detail

/// Separating-axis depth of two convex polygons: the smallest projection
/// overlap over all edge normals of both. Non-positive when separated or
/// touching; for convex inputs equal to the exact translational penetration.
template <typename Scalar>
Scalar sat_depth(const Polygon<Scalar>& a, const Polygon<Scalar>& b) {
  Scalar depth = std::numeric_limits<Scalar>::infinity();
  detail::min_overlap_over_edges(a, a, b, depth);
  detail::min_overlap_over_edges(b, a, b, depth);
  return depth;
}

/// Translational penetration depth of two intersecting polygons.
///
/// Maximum separating-axis depth over intersecting pairs of convex pieces
/// (see convex_pieces). Exact when both inputs are convex. Raises
/// PreconditionError when the polygons are separated.
template <typename Scalar>
Scalar penetration_depth(const Polygon<Scalar>& a, const Polygon<Scalar>& b) {
  if (min_distance(a, b) > 0) throw PreconditionError("penetration_depth called on separated polygons");
  Scalar best = 0;
  const auto pa = convex_pieces(a);
  const auto pb = convex_pieces(b);
  for (const auto& x : pa)
    for (const auto& y : pb) best = std::max(best, sat_depth(x, y));
  return best;
}

/// Signed collision distance between a robot (a set of parts) and obstacles:
/// the smallest separation when nothing touches, otherwise minus the largest
/// penetration depth over touching or overlapping (part, obstacle) pairs.
template <typename Scalar>
Scalar collision_distance(std::span<const Polygon<Scalar>> robot, std::span<const Polygon<Scalar>> obstacles) {
  if (robot.empty() || obstacles.empty()) throw PreconditionError("collision_distance needs robot parts and obstacles");
  Scalar nearest = std::numeric_limits<Scalar>::infinity();
  std::vector<std::pair<std::size_t, std::size_t>> contacts;
  for (std::size_t i = 0; i < robot.size(); ++i) {
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
      const Scalar d = min_distance(robot[i], obstacles[j]);
      if (d == 0) contacts.emplace_back(i, j);
      nearest = std::min(nearest, d);
    }
  }
  if (contacts.empty()) return nearest;
  Scalar deepest = 0;
  for (auto [i, j] : contacts) deepest = std::max(deepest, penetration_depth(robot[i], obstacles[j]));
  return deepest == 0 ? Scalar(0) : -deepest;
}

template <typename Scalar>
Scalar collision_distance(const std::vector<Polygon<Scalar>>& robot, const std::vector<Polygon<Scalar>>& obstacles) {
  return collision_distance(std::span<const Polygon<Scalar>>(robot), std::span<const Polygon<Scalar>>(obstacles));
}

}  // namespace graphdist

#endif  // GRAPHDIST_GEOMETRY_HPP
