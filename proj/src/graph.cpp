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

#include "graphdist/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "graphdist/random.hpp"

namespace graphdist {

Graph::Graph(Eigen::MatrixXd features, std::vector<Edge> edges, std::vector<Part> parts)
    : features_(std::move(features)), edges_(std::move(edges)), parts_(std::move(parts)) {
  const int n = node_count();
  if (features_.rows() != n) throw DimensionError("graph feature rows must equal node count");
  adjacency_.assign(static_cast<std::size_t>(n), {});
  for (Edge& e : edges_) {
    if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n) throw IndexError("graph edge index out of range");
    if (e.a == e.b) throw IndexError("graph self-loops are not stored");
    e = Edge::canonical(e.a, e.b);
    adjacency_[static_cast<std::size_t>(e.a)].push_back(e.b);
    adjacency_[static_cast<std::size_t>(e.b)].push_back(e.a);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
}

const std::vector<int>& Graph::neighbors(int i) const {
  if (i < 0 || i >= node_count()) throw IndexError("node index " + std::to_string(i) + " out of range");
  return adjacency_[static_cast<std::size_t>(i)];
}

int Graph::component_count() const {
  std::vector<int> root(static_cast<std::size_t>(node_count()));
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[static_cast<std::size_t>(x)] != x) x = root[static_cast<std::size_t>(x)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(x)])];
    return x;
  };
  int count = node_count();
  for (const Edge& e : edges_) {
    const int a = find(e.a), b = find(e.b);
    if (a != b) {
      root[static_cast<std::size_t>(a)] = b;
      --count;
    }
  }
  return count;
}

Graph polygons_to_graph(std::span<const Polygon2d> parts, Part label) {
  int n = 0;
  for (const auto& p : parts) n += static_cast<int>(p.size());
  Eigen::MatrixXd features(n, 2);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n));
  int offset = 0;
  for (const auto& p : parts) {
    const int m = static_cast<int>(p.size());
    for (int v = 0; v < m; ++v) {
      features.row(offset + v) = p.vertex(static_cast<std::size_t>(v)).transpose();
      edges.push_back(Edge::canonical(offset + v, offset + (v + 1) % m));
    }
    offset += m;
  }
  return Graph(std::move(features), std::move(edges), std::vector<Part>(static_cast<std::size_t>(n), label));
}

Graph disjoint_union(const Graph& first, const Graph& second) {
  if (first.node_count() > 0 && second.node_count() > 0 && first.features().cols() != second.features().cols())
    throw DimensionError("disjoint_union: feature dimensions differ");
  const int n1 = first.node_count();
  Eigen::MatrixXd features(n1 + second.node_count(), std::max(first.features().cols(), second.features().cols()));
  features << first.features(), second.features();
  std::vector<Edge> edges = first.edges();
  for (const Edge& e : second.edges()) edges.push_back({e.a + n1, e.b + n1});
  std::vector<Part> parts = first.parts();
  parts.insert(parts.end(), second.parts().begin(), second.parts().end());
  return Graph(std::move(features), std::move(edges), std::move(parts));
}

ConnectedGraph::ConnectedGraph(Graph base, int robot_nodes, std::vector<Edge> connector, ConnectorScheme scheme,
                               int robot_partner, int object_partner)
    : base_(std::move(base)),
      robot_nodes_(robot_nodes),
      connector_(std::move(connector)),
      scheme_(scheme),
      robot_partner_(robot_partner),
      object_partner_(object_partner) {}

int ConnectedGraph::partner_of(int i) const {
  if (scheme_ != ConnectorScheme::Sampled) throw GraphStateError("partner_of requires the sampled scheme");
  if (i < 0 || i >= node_count()) throw IndexError("node index " + std::to_string(i) + " out of range");
  return i < robot_nodes_ ? object_partner_ : robot_partner_;
}

nlohmann::json ConnectedGraph::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (int i = 0; i < node_count(); ++i) {
    nlohmann::json feat = nlohmann::json::array();
    for (Eigen::Index c = 0; c < base_.features().cols(); ++c) feat.push_back(base_.features()(i, c));
    nodes.push_back({{"id", i},
                     {"part", i < robot_nodes_ ? "robot" : "object"},
                     {"feature", feat},
                     {"neighbors", base_.neighbors(i)}});
  }
  nlohmann::json conn = nlohmann::json::array();
  for (const Edge& e : connector_) conn.push_back({e.a, e.b});
  return {{"scheme", scheme_ == ConnectorScheme::Sampled ? "sampled" : "fully_connected"},
          {"robot_partner", robot_partner_},
          {"object_partner", object_partner_},
          {"nodes", nodes},
          {"connector_edges", conn}};
}

std::pair<int, int> draw_partners(int robot_nodes, int object_nodes, std::uint64_t seed) {
  if (robot_nodes <= 0 || object_nodes <= 0) throw GraphStateError("partner draw needs non-empty parts");
  Rng rng(derive_seed(seed, {0x9a27}));
  const int r = static_cast<int>(rng.index(static_cast<std::uint64_t>(robot_nodes)));
  const int o = static_cast<int>(rng.index(static_cast<std::uint64_t>(object_nodes)));
  return {r, o};
}

ConnectedGraph connect(const Graph& robot, const Graph& objects, ConnectorScheme scheme,
                       std::optional<int> robot_partner, std::optional<int> object_partner, std::uint64_t seed) {
  const int nr = robot.node_count();
  const int no = objects.node_count();
  if (nr == 0 || no == 0) throw GraphStateError("connect needs non-empty robot and object graphs");
  Graph base = disjoint_union(robot, objects);
  std::vector<Edge> connector;
  if (scheme == ConnectorScheme::FullyConnected) {
    connector.reserve(static_cast<std::size_t>(nr) * static_cast<std::size_t>(no));
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < no; ++j) connector.push_back({i, nr + j});
    return ConnectedGraph(std::move(base), nr, std::move(connector), scheme, -1, -1);
  }
  int jr = 0, jo = 0;
  if (!robot_partner || !object_partner) {
    const auto [r, o] = draw_partners(nr, no, seed);
    jr = r;
    jo = nr + o;
  }
  if (robot_partner) {
    if (*robot_partner < 0 || *robot_partner >= nr)
      throw IndexError("robot partner " + std::to_string(*robot_partner) + " is not a robot node");
    jr = *robot_partner;
  }
  if (object_partner) {
    if (*object_partner < nr || *object_partner >= nr + no)
      throw IndexError("object partner " + std::to_string(*object_partner) + " is not an object node");
    jo = *object_partner;
  }
  connector.reserve(static_cast<std::size_t>(nr + no - 1));
  for (int i = 0; i < nr; ++i) connector.push_back({i, jo});
  for (int j = nr; j < nr + no; ++j)
    if (j != jo) connector.push_back({jr, j});
  std::sort(connector.begin(), connector.end());
  return ConnectedGraph(std::move(base), nr, std::move(connector), scheme, jr, jo);
}

const std::vector<int>& neighbors_within_part(const ConnectedGraph& g, int i) { return g.base().neighbors(i); }

}  // namespace graphdist
