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

// Brute-force reference implementations used by the tests. They share no code
// with the library beyond the Polygon container.

#ifndef GRAPHDIST_TESTS_ORACLES_HPP
#define GRAPHDIST_TESTS_ORACLES_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "graphdist/geometry.hpp"

namespace oracle {

using P = Eigen::Vector2d;
using graphdist::Polygon2d;

inline double point_to_segment(const P& p, const P& a, const P& b) {
  const P ab = b - a;
  double t = ab.dot(p - a) / ab.squaredNorm();
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

// Winding-number point-in-polygon test (boundary counts as inside).
inline bool inside(const Polygon2d& poly, const P& p) {
  const auto& v = poly.vertices();
  double winding = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const P& a = v[i];
    const P& b = v[(i + 1) % v.size()];
    if (point_to_segment(p, a, b) < 1e-14) return true;
    winding += std::atan2((a - p).x() * (b - p).y() - (a - p).y() * (b - p).x(), (a - p).dot(b - p));
  }
  return std::abs(winding) > std::numbers::pi;
}

/// Minimum distance by dense sampling: `samples` points per edge of each
/// polygon, each measured against every edge of the other polygon.
inline double sampled_min_distance(const Polygon2d& a, const Polygon2d& b, int samples = 10000) {
  for (const P& p : a.vertices())
    if (inside(b, p)) return 0;
  for (const P& p : b.vertices())
    if (inside(a, p)) return 0;
  double best = std::numeric_limits<double>::infinity();
  const auto sweep = [&](const Polygon2d& from, const Polygon2d& to) {
    const auto& f = from.vertices();
    const auto& t = to.vertices();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const P& p0 = f[i];
      const P& p1 = f[(i + 1) % f.size()];
      for (int s = 0; s <= samples; ++s) {
        const P p = p0 + (static_cast<double>(s) / samples) * (p1 - p0);
        for (std::size_t j = 0; j < t.size(); ++j) best = std::min(best, point_to_segment(p, t[j], t[(j + 1) % t.size()]));
      }
    }
  };
  sweep(a, b);
  sweep(b, a);
  return best;
}

inline double cross(const P& a, const P& b) { return a.x() * b.y() - a.y() * b.x(); }

// Proper crossing of two open segments.
inline bool segments_cross(const P& p1, const P& p2, const P& q1, const P& q2) {
  const double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Interiors overlap: a proper edge crossing, or a vertex (or centroid) of one
// strictly inside the other.
inline bool interiors_overlap(const Polygon2d& a, const Polygon2d& b) {
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  for (std::size_t i = 0; i < va.size(); ++i)
    for (std::size_t j = 0; j < vb.size(); ++j)
      if (segments_cross(va[i], va[(i + 1) % va.size()], vb[j], vb[(j + 1) % vb.size()])) return true;
  const auto strictly = [](const Polygon2d& poly, const P& p) {
    const auto& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i)
      if (cross(v[(i + 1) % v.size()] - v[i], p - v[i]) <= 1e-15) return false;
    return true;  // convex, counter-clockwise
  };
  for (const P& p : va)
    if (strictly(b, p)) return true;
  for (const P& p : vb)
    if (strictly(a, p)) return true;
  return strictly(b, a.centroid()) || strictly(a, b.centroid());
}

// Smallest t with b + t*u no longer overlapping a (convex inputs).
inline double separation_along(const Polygon2d& a, const Polygon2d& b, const P& u, double tol) {
  double lo = 0, hi = 1;
  while (interiors_overlap(a, b.translated(hi * u))) hi *= 2;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (interiors_overlap(a, b.translated(mid * u)))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Penetration depth as the shortest separating translation: `directions`
/// uniformly spaced directions, bisection along each, then golden-section
/// refinement around the best direction.
inline double directional_penetration(const Polygon2d& a, const Polygon2d& b, int directions = 3600,
                                      double tol = 1e-7, bool refine = false) {
  const auto at = [&](double phi, double t) { return separation_along(a, b, P(std::cos(phi), std::sin(phi)), t); };
  double best = std::numeric_limits<double>::infinity(), best_phi = 0;
  for (int k = 0; k < directions; ++k) {
    const double phi = 2 * std::numbers::pi * k / directions;
    const double d = at(phi, tol);
    if (d < best) {
      best = d;
      best_phi = phi;
    }
  }
  if (!refine) return best;
  const double step = 2 * std::numbers::pi / directions;
  double lo = best_phi - step, hi = best_phi + step;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = at(x1, 1e-13), f2 = at(x2, 1e-13);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = at(x1, 1e-13);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = at(x2, 1e-13);
    }
  }
  return std::min({best, f1, f2});
}

/// Random convex polygon: `n` sorted random angles on a rotated ellipse.
inline Polygon2d random_convex(std::mt19937_64& rng, int n, const P& centre, double radius) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (;;) {
    for (double& a : angles) a = 2 * std::numbers::pi * u(rng);
    std::sort(angles.begin(), angles.end());
    bool spread = true;
    for (int i = 0; i < n; ++i) {
      const double gap = i + 1 < n ? angles[i + 1] - angles[i] : angles[0] + 2 * std::numbers::pi - angles[i];
      if (gap < 0.15) spread = false;
    }
    if (spread) break;
  }
  const double ax = radius * (0.6 + 0.4 * u(rng)), ay = radius * (0.6 + 0.4 * u(rng)), rot = 2 * std::numbers::pi * u(rng);
  std::vector<P> pts;
  for (double a : angles) {
    const P e(ax * std::cos(a), ay * std::sin(a));
    pts.push_back(centre + P(std::cos(rot) * e.x() - std::sin(rot) * e.y(), std::sin(rot) * e.x() + std::cos(rot) * e.y()));
  }
  return Polygon2d(pts);
}

/// Central finite difference of f at x along each coordinate.
inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
                                          double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double x0 = x(i);
    x(i) = x0 + h;
    const double up = f(x);
    x(i) = x0 - h;
    const double down = f(x);
    x(i) = x0;
    g(i) = (up - down) / (2 * h);
  }
  return g;
}

inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-8) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), floor});
}

}  // namespace oracle

#endif  // GRAPHDIST_TESTS_ORACLES_HPP
