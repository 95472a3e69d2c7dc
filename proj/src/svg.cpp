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

#include "graphdist/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace graphdist {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string color(double v, double scale) {
  const double t = scale > 0 ? std::clamp(v / scale, -1.0, 1.0) : 0.0;
  // White at zero, red for negative, blue for positive.
  const auto mix = [&](double full) { return static_cast<int>(std::lround(255 + (full - 255) * std::abs(t))); };
  int r = 255, g = 255, b = 255;
  if (t < 0) {
    g = mix(40);
    b = mix(40);
  } else {
    r = mix(40);
    g = mix(90);
  }
  std::ostringstream s;
  s << "rgb(" << r << ',' << g << ',' << b << ')';
  return s.str();
}

Point2<double> crossing(const Point2<double>& p, double vp, const Point2<double>& q, double vq) {
  const double t = vp / (vp - vq);
  return p + t * (q - p);
}

}  // namespace

std::vector<Segment2> zero_contour(const Eigen::MatrixXd& grid) {
  std::vector<Segment2> out;
  for (Eigen::Index r = 0; r + 1 < grid.rows(); ++r)
    for (Eigen::Index c = 0; c + 1 < grid.cols(); ++c) {
      // Corners counter-clockwise from (r, c); x is the column.
      const Point2<double> p[4] = {{double(c), double(r)}, {double(c + 1), double(r)}, {double(c + 1), double(r + 1)},
                                   {double(c), double(r + 1)}};
      const double v[4] = {grid(r, c), grid(r, c + 1), grid(r + 1, c + 1), grid(r + 1, c)};
      std::vector<Point2<double>> pts;
      for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        if ((v[e] > 0) != (v[f] > 0)) pts.push_back(crossing(p[e], v[e], p[f], v[f]));
      }
      if (pts.size() == 2) {
        out.push_back({pts[0], pts[1]});
      } else if (pts.size() == 4) {
        // Saddle: the centre value decides which corners connect.
        const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        if ((centre > 0) == (v[0] > 0)) {
          out.push_back({pts[0], pts[3]});
          out.push_back({pts[1], pts[2]});
        } else {
          out.push_back({pts[0], pts[1]});
          out.push_back({pts[2], pts[3]});
        }
      }
    }
  return out;
}

std::string heatmap_svg(const Eigen::MatrixXd& grid, const HeatmapOptions& o, const Eigen::MatrixXd& polyline) {
  const int px = std::max(1, o.cell_pixels);
  const auto width = static_cast<double>(grid.cols() * px), height = static_cast<double>(grid.rows() * px);
  const double scale = grid.size() ? grid.cwiseAbs().maxCoeff() : 0.0;
  std::ostringstream s;
  s.precision(6);
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height + 24
    << "\" viewBox=\"0 0 " << width << ' ' << height + 24 << "\">\n";
  if (!o.title.empty())
    s << "<text x=\"4\" y=\"" << height + 17 << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(o.title)
      << "</text>\n";
  s << "<g shape-rendering=\"crispEdges\">\n";
  for (Eigen::Index r = 0; r < grid.rows(); ++r)
    for (Eigen::Index c = 0; c < grid.cols(); ++c)
      s << "<rect x=\"" << c * px << "\" y=\"" << height - static_cast<double>((r + 1) * px) << "\" width=\"" << px
        << "\" height=\"" << px << "\" fill=\"" << color(grid(r, c), scale) << "\"/>\n";
  s << "</g>\n<g stroke=\"black\" stroke-width=\"1.5\" fill=\"none\">\n";
  for (const Segment2& seg : zero_contour(grid)) {
    const auto tx = [&](const Point2<double>& p) { return (p.x() + 0.5) * px; };
    const auto ty = [&](const Point2<double>& p) { return height - (p.y() + 0.5) * px; };
    s << "<line x1=\"" << tx(seg.a) << "\" y1=\"" << ty(seg.a) << "\" x2=\"" << tx(seg.b) << "\" y2=\"" << ty(seg.b)
      << "\"/>\n";
  }
  s << "</g>\n";
  if (polyline.rows() > 0 && polyline.cols() >= 2) {
    s << "<polyline fill=\"none\" stroke=\"#1a9e3f\" stroke-width=\"2\" points=\"";
    for (Eigen::Index i = 0; i < polyline.rows(); ++i)
      s << (i ? " " : "") << (polyline(i, 0) - o.x_min) / (o.x_max - o.x_min) * width << ','
        << height - (polyline(i, 1) - o.y_min) / (o.y_max - o.y_min) * height;
    s << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string scene_svg(const Environment& env, const Eigen::MatrixXd& configurations, int pixels) {
  const Point2<double> lo = env.bounds.min(), hi = env.bounds.max();
  const double w = hi.x() - lo.x(), h = hi.y() - lo.y();
  const double sx = pixels / w, sy = pixels / w;
  const double height = h * sy;
  const auto points = [&](const Polygon2d& p) {
    std::ostringstream s;
    s.precision(6);
    for (std::size_t i = 0; i < p.size(); ++i)
      s << (i ? " " : "") << (p.vertex(i).x() - lo.x()) * sx << ',' << height - (p.vertex(i).y() - lo.y()) * sy;
    return s.str();
  };
  std::ostringstream s;
  s.precision(6);
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\"" << height << "\" viewBox=\"0 0 "
    << pixels << ' ' << height << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\" stroke=\"#888\"/>\n";
  for (const Polygon2d& p : env.obstacles)
    s << "<polygon points=\"" << points(p) << "\" fill=\"#d98c2b\" stroke=\"#7a4a10\"/>\n";
  const Eigen::Index n = configurations.rows();
  for (Eigen::Index t = 0; t < n; ++t) {
    std::vector<double> q(static_cast<std::size_t>(configurations.cols()));
    for (Eigen::Index j = 0; j < configurations.cols(); ++j) q[static_cast<std::size_t>(j)] = configurations(t, j);
    const double opacity = n > 1 ? 0.15 + 0.75 * static_cast<double>(t) / static_cast<double>(n - 1) : 0.9;
    for (const Polygon2d& link : forward_kinematics(env.arm, q))
      s << "<polygon points=\"" << points(link) << "\" fill=\"#3465a4\" fill-opacity=\"" << opacity
        << "\" stroke=\"#1c3b66\" stroke-opacity=\"" << opacity << "\"/>\n";
  }
  s << "<circle cx=\"" << (env.arm.base.x() - lo.x()) * sx << "\" cy=\"" << height - (env.arm.base.y() - lo.y()) * sy
    << "\" r=\"4\" fill=\"black\"/>\n</svg>\n";
  return s.str();
}

}  // namespace graphdist
