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

#ifndef GRAPHDIST_GRAPH_HPP
#define GRAPHDIST_GRAPH_HPP

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "graphdist/geometry.hpp"

namespace graphdist {

enum class Part : std::uint8_t { Robot, Object };

// Undirected edge stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;

  static Edge canonical(int i, int j) { return i < j ? Edge{i, j} : Edge{j, i}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected graph with one feature row per node and a part label per node.
class Graph {
 public:
  Graph() = default;
  Graph(Eigen::MatrixXd features, std::vector<Edge> edges, std::vector<Part> parts);

  int node_count() const noexcept { return static_cast<int>(parts_.size()); }
  const Eigen::MatrixXd& features() const noexcept { return features_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Part>& parts() const noexcept { return parts_; }
  Part part(int i) const { return parts_.at(static_cast<std::size_t>(i)); }
  // Ascending.
  const std::vector<int>& neighbors(int i) const;
  int component_count() const;

 private:
  Eigen::MatrixXd features_;
  std::vector<Edge> edges_;
  std::vector<Part> parts_;
  std::vector<std::vector<int>> adjacency_;
};

/// One node per vertex (feature = its coordinate) and one edge per boundary
/// segment; polygons become disjoint components, in input order.
Graph polygons_to_graph(std::span<const Polygon2d> parts, Part label);

/// Disjoint union, `first` nodes numbered before `second` nodes.
Graph disjoint_union(const Graph& first, const Graph& second);

enum class ConnectorScheme { FullyConnected, Sampled };

/// Robot graph and object graph joined by bipartite connector edges.
///
/// Nodes are numbered robot first, then objects. Under the sampled scheme
/// every robot node links to the object partner and every object node to the
/// robot partner; the edge between the two partners is stored once.
class ConnectedGraph {
 public:
  ConnectedGraph(Graph base, int robot_nodes, std::vector<Edge> connector, ConnectorScheme scheme,
                 int robot_partner, int object_partner);

  const Graph& base() const noexcept { return base_; }
  int node_count() const noexcept { return base_.node_count(); }
  int robot_nodes() const noexcept { return robot_nodes_; }
  int object_nodes() const noexcept { return base_.node_count() - robot_nodes_; }
  const std::vector<Edge>& connector_edges() const noexcept { return connector_; }
  ConnectorScheme scheme() const noexcept { return scheme_; }
  // Global node indices of the partners (j_c,r and j_c,o); -1 when fully connected.
  int robot_partner() const noexcept { return robot_partner_; }
  int object_partner() const noexcept { return object_partner_; }
  // Connector partner of node i under the sampled scheme.
  int partner_of(int i) const;

  nlohmann::json to_json() const;

 private:
  Graph base_;
  int robot_nodes_ = 0;
  std::vector<Edge> connector_;
  ConnectorScheme scheme_ = ConnectorScheme::Sampled;
  int robot_partner_ = -1;
  int object_partner_ = -1;
};

// Uniform partner draw used for the initial sampled connection: returns
// (robot index in [0, robot_nodes), object index in [0, object_nodes)).
std::pair<int, int> draw_partners(int robot_nodes, int object_nodes, std::uint64_t seed);

/// Joins robot and object graphs. Partner indices are global (robot nodes
/// first); missing partners are drawn from `seed`. The fully connected scheme
/// ignores partners.
ConnectedGraph connect(const Graph& robot, const Graph& objects, ConnectorScheme scheme,
                       std::optional<int> robot_partner = std::nullopt,
                       std::optional<int> object_partner = std::nullopt, std::uint64_t seed = 0);

/// Neighbours of i through robot or object boundary edges only; ascending.
const std::vector<int>& neighbors_within_part(const ConnectedGraph& g, int i);

}  // namespace graphdist

#endif  // GRAPHDIST_GRAPH_HPP
