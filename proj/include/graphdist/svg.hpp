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

#ifndef GRAPHDIST_SVG_HPP
#define GRAPHDIST_SVG_HPP

#include <Eigen/Core>

#include <string>
#include <vector>

#include "graphdist/environment.hpp"

namespace graphdist {

struct Segment2 {
  Point2<double> a, b;
};

/// Zero level set of a grid sampled at cell centres by marching squares, in
/// grid coordinates (x = column index, y = row index).
std::vector<Segment2> zero_contour(const Eigen::MatrixXd& grid);

struct HeatmapOptions {
  double x_min = -3.141592653589793, x_max = 3.141592653589793;  // columns
  double y_min = -3.141592653589793, y_max = 3.141592653589793;  // rows
  int cell_pixels = 8;
  std::string title;
};

/// Diverging heatmap of `grid` (row r, column c) with its zero contour and an
/// optional polyline given in axis coordinates (one point per row).
std::string heatmap_svg(const Eigen::MatrixXd& grid, const HeatmapOptions& options,
                        const Eigen::MatrixXd& polyline = Eigen::MatrixXd());

/// Workspace view: obstacles plus the arm drawn at each configuration.
std::string scene_svg(const Environment& env, const Eigen::MatrixXd& configurations, int pixels = 480);

}  // namespace graphdist

#endif  // GRAPHDIST_SVG_HPP
