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

#ifndef GRAPHDIST_MODEL_HPP
#define GRAPHDIST_MODEL_HPP

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "graphdist/autodiff.hpp"
#include "graphdist/geometry.hpp"
#include "graphdist/graph.hpp"
#include "graphdist/kinematics.hpp"

namespace graphdist {

struct ModelConfig {
  int layers = 3;          // K message-passing layers
  int hidden = 32;         // d_h
  int mlp_width = 32;
  int mlp_hidden_layers = 3;
  double slope = 0.2;      // leaky ReLU

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // inputs x outputs
  Eigen::RowVectorXd bias;
};

// Hidden layers use leaky ReLU; the last layer is linear.
struct Mlp {
  std::vector<DenseLayer> layers;

  Eigen::Index inputs() const { return layers.front().weight.rows(); }
  Eigen::Index outputs() const { return layers.back().weight.cols(); }
};

/// Complete learnable state: one edge encoder per layer, one attention vector
/// per layer output, and the readout regressor.
struct ModelParams {
  ModelConfig config;
  std::uint64_t seed = 0;
  std::vector<Mlp> encoders;                 // encoders[k]: layer k -> k+1
  std::vector<Eigen::VectorXd> attention;    // attention[k-1] scores layer-k features
  Mlp readout;

  static ModelParams initialize(const ModelConfig& config, std::uint64_t seed);

  // Expected input width of encoder k: 4 at k = 0, 2 * hidden + 4 afterwards.
  static Eigen::Index encoder_inputs(const ModelConfig& config, int k);

  // Throws DimensionError on any shape inconsistency or non-finite entry.
  void validate() const;

  std::size_t parameter_count() const;
  // Declared order: encoders (weight, bias per layer), attention vectors,
  // readout (weight, bias per layer). Weights row-major.
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
};

/// Topology and layer-0 coordinates of one robot/obstacle scene. Nodes are
/// robot vertices then obstacle vertices, polygon by polygon.
struct SceneGraph {
  int robot_nodes = 0;
  int object_nodes = 0;
  Eigen::MatrixXd coords;                   // nodes x 2
  std::vector<std::vector<int>> neighbors;  // within-part, ascending

  int node_count() const noexcept { return robot_nodes + object_nodes; }
};

SceneGraph make_scene_graph(std::span<const Polygon2d> robot, std::span<const Polygon2d> obstacles);
SceneGraph make_scene_graph(const ConnectedGraph& g);

// Partner indices local to their part: (robot node, object node).
using PartnerPair = std::pair<int, int>;

struct LayerTrace {
  std::vector<Eigen::MatrixXd> features;   // X^(0) .. X^(K)
  std::vector<Eigen::VectorXd> attention;  // alpha at layers 1..K (robot nodes then object nodes)
  std::vector<PartnerPair> partners;       // partners used by conv layers 0..K-1, global indices
  PartnerPair final_partners{-1, -1};      // attention argmax after layer K
  std::vector<Eigen::VectorXd> robot_summary;   // y_r^(k), k = 1..K
  std::vector<Eigen::VectorXd> object_summary;  // y_o^(k)
};

struct Prediction {
  double distance = 0;
  LayerTrace trace;
};

struct JointGradient {
  double distance = 0;
  Eigen::VectorXd gradient;
};

namespace model {

// Edge feature for the (i -> j) pair at layer k: the layer-0 coordinate
// difference, followed at k > 0 by the layer-k feature difference.
Eigen::VectorXd edge_feature(int i, int j, int k, const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk);

struct PartnerSelection {
  int robot_partner = 0;   // global index, argmax of robot attention
  int object_partner = 0;  // global index, argmax of object attention
  Eigen::VectorXd attention;
};

// Per-part softmax of a^T x_i; robot nodes are rows [0, robot_nodes).
PartnerSelection select_partners(const Eigen::MatrixXd& xk, const Eigen::VectorXd& a, int robot_nodes);

// One convolution with fixed partners; returns the next node features.
Eigen::MatrixXd conv_layer(const ConnectedGraph& g, int k, const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk,
                           const ModelParams& params);

/// Parameters bound as tape leaves.
struct TapeParams {
  std::vector<std::vector<std::pair<ad::Value, ad::Value>>> encoders;
  std::vector<ad::Value> attention;
  std::vector<std::pair<ad::Value, ad::Value>> readout;
};

TapeParams bind(ad::Tape& tape, const ModelParams& params, bool trainable);

// Gradient of the last backward root w.r.t. every parameter, in flatten() order.
Eigen::VectorXd collect_gradient(const ad::Tape& tape, const TapeParams& bound, const ModelParams& params);

ad::Value mlp_forward(const ad::Value& x, const std::vector<std::pair<ad::Value, ad::Value>>& layers, double slope);

/// Runs the network on a disjoint-union batch. `coords` stacks the layer-0
/// coordinates of every scene in order (robot then object rows per scene).
/// Returns a (scenes x 1) column of distance estimates. When `traces` is
/// non-null it receives one trace per scene.
ad::Value forward_batch(ad::Tape& tape, const TapeParams& bound, const ModelConfig& config,
                        std::span<const SceneGraph* const> scenes, std::span<const PartnerPair> initial_partners,
                        const ad::Value& coords, std::vector<LayerTrace>* traces = nullptr);

// Stacks the coordinates of the given scenes.
Eigen::MatrixXd stack_coords(std::span<const SceneGraph* const> scenes);

}  // namespace model

/// Learned collision-distance estimator over robot/obstacle polygon graphs.
class GraphDistNet {
 public:
  explicit GraphDistNet(ModelParams params);

  const ModelParams& params() const noexcept { return params_; }

  Prediction forward(std::span<const Polygon2d> robot, std::span<const Polygon2d> obstacles, std::uint64_t seed) const;
  Prediction forward(const SceneGraph& scene, PartnerPair initial_partners) const;
  double predict(std::span<const Polygon2d> robot, std::span<const Polygon2d> obstacles, std::uint64_t seed) const;
  std::vector<double> predict_batch(std::span<const SceneGraph* const> scenes, std::span<const std::uint64_t> seeds) const;

  /// d-hat and its gradient w.r.t. the joint angles, with forward kinematics
  /// recorded on the tape. Partner selections are held fixed.
  JointGradient gradient_wrt_joints(const PlanarArm& arm, std::span<const double> joints,
                                    std::span<const Polygon2d> obstacles, std::uint64_t seed) const;

 private:
  ModelParams params_;
};

// Binary collision predicate: distance at or below the margin.
constexpr bool is_collision(double distance, double margin) noexcept { return distance <= margin; }

PartnerPair initial_partners(const SceneGraph& scene, std::uint64_t seed);

// Robot layer-0 coordinates on the tape from forward kinematics, one row per
// robot node in link order.
ad::Value robot_coords_on_tape(ad::Tape& tape, const PlanarArm& arm, std::span<const ad::Value> joints);

}  // namespace graphdist

#endif  // GRAPHDIST_MODEL_HPP
