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

#include "graphdist/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "graphdist/random.hpp"

namespace graphdist {

namespace {

DenseLayer init_dense(Rng& rng, Eigen::Index in, Eigen::Index out, double bound) {
  DenseLayer d;
  d.weight.resize(in, out);
  for (Eigen::Index r = 0; r < in; ++r)
    for (Eigen::Index c = 0; c < out; ++c) d.weight(r, c) = rng.uniform(-bound, bound);
  d.bias = Eigen::RowVectorXd::Zero(out);
  return d;
}

Mlp init_mlp(Rng& rng, Eigen::Index in, int width, int hidden_layers, Eigen::Index out, double slope) {
  Mlp m;
  Eigen::Index fan_in = in;
  for (int l = 0; l < hidden_layers; ++l) {
    m.layers.push_back(init_dense(rng, fan_in, width, std::sqrt(6.0 / ((1.0 + slope * slope) * fan_in))));
    fan_in = width;
  }
  m.layers.push_back(init_dense(rng, fan_in, out, std::sqrt(6.0 / static_cast<double>(fan_in + out))));
  return m;
}

void check_mlp(const Mlp& m, Eigen::Index in, int width, int hidden_layers, Eigen::Index out, const std::string& name) {
  if (m.layers.size() != static_cast<std::size_t>(hidden_layers + 1))
    throw DimensionError(name + ": expected " + std::to_string(hidden_layers + 1) + " dense layers");
  Eigen::Index fan_in = in;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const Eigen::Index fan_out = l + 1 == m.layers.size() ? out : width;
    const DenseLayer& d = m.layers[l];
    if (d.weight.rows() != fan_in || d.weight.cols() != fan_out || d.bias.size() != fan_out)
      throw DimensionError(name + " layer " + std::to_string(l) + ": expected " + std::to_string(fan_in) + "x" +
                           std::to_string(fan_out));
    if (!d.weight.allFinite() || !d.bias.allFinite()) throw DimensionError(name + ": non-finite parameter");
    fan_in = fan_out;
  }
}

template <typename F>
void visit_blocks(const ModelParams& p, F&& f) {
  for (const Mlp& m : p.encoders)
    for (const DenseLayer& d : m.layers) {
      f(d.weight);
      f(d.bias);
    }
  for (const Eigen::VectorXd& a : p.attention) f(a);
  for (const DenseLayer& d : p.readout.layers) {
    f(d.weight);
    f(d.bias);
  }
}

template <typename F>
void visit_blocks_mut(ModelParams& p, F&& f) {
  for (Mlp& m : p.encoders)
    for (DenseLayer& d : m.layers) {
      f(d.weight);
      f(d.bias);
    }
  for (Eigen::VectorXd& a : p.attention) f(a);
  for (DenseLayer& d : p.readout.layers) {
    f(d.weight);
    f(d.bias);
  }
}

// Row-major copy of a block into flat[offset...].
template <typename Derived>
void write_block(const Eigen::MatrixBase<Derived>& m, Eigen::VectorXd& flat, Eigen::Index& offset) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat(offset++) = m(r, c);
}

template <typename Derived>
void read_block(Eigen::MatrixBase<Derived>& m, const Eigen::VectorXd& flat, Eigen::Index& offset) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = flat(offset++);
}

struct BatchLayout {
  int nodes = 0;
  int segments = 0;
  std::vector<int> offset;
  std::vector<int> segment;
  std::vector<int> term_target;
  std::vector<int> term_source;
  std::vector<int> robot_segments;
  std::vector<int> object_segments;
  std::vector<std::vector<int>> segment_nodes;
};

BatchLayout make_layout(std::span<const SceneGraph* const> scenes) {
  BatchLayout l;
  const int b = static_cast<int>(scenes.size());
  l.segments = 2 * b;
  l.offset.resize(static_cast<std::size_t>(b + 1), 0);
  l.segment_nodes.resize(static_cast<std::size_t>(l.segments));
  for (int s = 0; s < b; ++s) {
    const SceneGraph& g = *scenes[static_cast<std::size_t>(s)];
    if (g.robot_nodes <= 0 || g.object_nodes <= 0) throw GraphStateError("scene needs robot and object nodes");
    if (static_cast<int>(g.neighbors.size()) != g.node_count() || g.coords.rows() != g.node_count())
      throw DimensionError("scene graph is inconsistent");
    const int off = l.offset[static_cast<std::size_t>(s)];
    for (int i = 0; i < g.node_count(); ++i) {
      const int seg = 2 * s + (i < g.robot_nodes ? 0 : 1);
      l.segment.push_back(seg);
      l.segment_nodes[static_cast<std::size_t>(seg)].push_back(off + i);
      bool self_done = false;
      for (int j : g.neighbors[static_cast<std::size_t>(i)]) {
        if (!self_done && i < j) {
          l.term_target.push_back(off + i);
          l.term_source.push_back(off + i);
          self_done = true;
        }
        l.term_target.push_back(off + i);
        l.term_source.push_back(off + j);
      }
      if (!self_done) {
        l.term_target.push_back(off + i);
        l.term_source.push_back(off + i);
      }
    }
    l.robot_segments.push_back(2 * s);
    l.object_segments.push_back(2 * s + 1);
    l.offset[static_cast<std::size_t>(s + 1)] = off + g.node_count();
  }
  l.nodes = l.offset.back();
  return l;
}

// Argmax (first on ties) of `alpha` within each segment.
std::vector<int> segment_argmax(const Eigen::MatrixXd& alpha, const BatchLayout& l) {
  std::vector<int> best(static_cast<std::size_t>(l.segments), -1);
  for (int seg = 0; seg < l.segments; ++seg) {
    double top = -1;
    for (int node : l.segment_nodes[static_cast<std::size_t>(seg)]) {
      if (alpha(node, 0) > top) {
        top = alpha(node, 0);
        best[static_cast<std::size_t>(seg)] = node;
      }
    }
  }
  return best;
}

// Connector partner of each node: robot nodes point at the object partner of
// their scene and object nodes at the robot partner.
std::vector<int> partner_per_node(const std::vector<int>& robot_partner, const std::vector<int>& object_partner,
                                  const BatchLayout& l) {
  std::vector<int> partner(static_cast<std::size_t>(l.nodes));
  for (int i = 0; i < l.nodes; ++i) {
    const int seg = l.segment[static_cast<std::size_t>(i)];
    const std::size_t s = static_cast<std::size_t>(seg / 2);
    partner[static_cast<std::size_t>(i)] = seg % 2 == 0 ? object_partner[s] : robot_partner[s];
  }
  return partner;
}

// x^(k+1)_i = sum over j in N(i) + {i} of h_k(loc_ij || rel_i).
ad::Value conv_on_tape(const std::vector<std::pair<ad::Value, ad::Value>>& encoder, double slope, const ad::Value& x0,
                       const ad::Value* xk, const BatchLayout& l, const std::vector<int>& partner) {
  ad::Value z = x0;
  if (xk) {
    const ad::Value parts[] = {x0, *xk};
    z = ad::concat_cols(parts);
  }
  const ad::Value z_target = ad::gather_rows(z, l.term_target);
  const ad::Value local = ad::gather_rows(z, l.term_source) - z_target;
  const ad::Value relative_node = ad::gather_rows(z, partner) - z;
  const ad::Value relative = ad::gather_rows(relative_node, l.term_target);
  const ad::Value inputs[] = {local, relative};
  const ad::Value h = model::mlp_forward(ad::concat_cols(inputs), encoder, slope);
  return ad::scatter_add_rows(h, l.term_target, l.nodes);
}

}  // namespace

Eigen::Index ModelParams::encoder_inputs(const ModelConfig& config, int k) {
  return k == 0 ? 4 : 2 * static_cast<Eigen::Index>(config.hidden) + 4;
}

ModelParams ModelParams::initialize(const ModelConfig& config, std::uint64_t seed) {
  if (config.layers < 1 || config.hidden < 1 || config.mlp_width < 1 || config.mlp_hidden_layers < 0)
    throw ConfigError("model sizes must be positive");
  ModelParams p;
  p.config = config;
  p.seed = seed;
  for (int k = 0; k < config.layers; ++k) {
    Rng rng(derive_seed(seed, {1, static_cast<std::uint64_t>(k)}));
    p.encoders.push_back(init_mlp(rng, encoder_inputs(config, k), config.mlp_width, config.mlp_hidden_layers,
                                  config.hidden, config.slope));
  }
  for (int k = 0; k < config.layers; ++k) {
    Rng rng(derive_seed(seed, {2, static_cast<std::uint64_t>(k)}));
    const double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden));
    Eigen::VectorXd a(config.hidden);
    for (int i = 0; i < config.hidden; ++i) a(i) = rng.uniform(-bound, bound);
    p.attention.push_back(a);
  }
  Rng rng(derive_seed(seed, {3}));
  p.readout = init_mlp(rng, 2 * config.hidden, config.mlp_width, config.mlp_hidden_layers, 1, config.slope);
  return p;
}

void ModelParams::validate() const {
  if (encoders.size() != static_cast<std::size_t>(config.layers))
    throw DimensionError("expected " + std::to_string(config.layers) + " encoders");
  for (int k = 0; k < config.layers; ++k)
    check_mlp(encoders[static_cast<std::size_t>(k)], encoder_inputs(config, k), config.mlp_width,
              config.mlp_hidden_layers, config.hidden, "encoder " + std::to_string(k));
  if (attention.size() != static_cast<std::size_t>(config.layers))
    throw DimensionError("expected " + std::to_string(config.layers) + " attention vectors");
  for (const auto& a : attention) {
    if (a.size() != config.hidden) throw DimensionError("attention vector has wrong length");
    if (!a.allFinite()) throw DimensionError("attention: non-finite parameter");
  }
  check_mlp(readout, 2 * config.hidden, config.mlp_width, config.mlp_hidden_layers, 1, "readout");
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  visit_blocks(*this, [&](const auto& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

Eigen::VectorXd ModelParams::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index offset = 0;
  visit_blocks(*this, [&](const auto& m) { write_block(m, flat, offset); });
  return flat;
}

void ModelParams::assign(const Eigen::VectorXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(parameter_count()))
    throw DimensionError("parameter vector has " + std::to_string(flat.size()) + " entries, expected " +
                         std::to_string(parameter_count()));
  Eigen::Index offset = 0;
  visit_blocks_mut(*this, [&](auto& m) { read_block(m, flat, offset); });
}

SceneGraph make_scene_graph(std::span<const Polygon2d> robot, std::span<const Polygon2d> obstacles) {
  const Graph r = polygons_to_graph(robot, Part::Robot);
  const Graph o = polygons_to_graph(obstacles, Part::Object);
  const Graph u = disjoint_union(r, o);
  SceneGraph g;
  g.robot_nodes = r.node_count();
  g.object_nodes = o.node_count();
  g.coords = u.features();
  g.neighbors.reserve(static_cast<std::size_t>(u.node_count()));
  for (int i = 0; i < u.node_count(); ++i) g.neighbors.push_back(u.neighbors(i));
  return g;
}

SceneGraph make_scene_graph(const ConnectedGraph& cg) {
  SceneGraph g;
  g.robot_nodes = cg.robot_nodes();
  g.object_nodes = cg.object_nodes();
  g.coords = cg.base().features();
  for (int i = 0; i < cg.node_count(); ++i) g.neighbors.push_back(neighbors_within_part(cg, i));
  return g;
}

PartnerPair initial_partners(const SceneGraph& scene, std::uint64_t seed) {
  return draw_partners(scene.robot_nodes, scene.object_nodes, seed);
}

namespace model {

Eigen::VectorXd edge_feature(int i, int j, int k, const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk) {
  if (x0.cols() != 2) throw DimensionError("layer-0 features must be 2-dimensional");
  if (i < 0 || j < 0 || i >= x0.rows() || j >= x0.rows()) throw IndexError("edge_feature: node index out of range");
  const Eigen::VectorXd base = (x0.row(j) - x0.row(i)).transpose();
  if (k == 0) return base;
  if (xk.rows() != x0.rows()) throw DimensionError("edge_feature: layer-k features have wrong row count");
  Eigen::VectorXd out(2 + xk.cols());
  out << base, (xk.row(j) - xk.row(i)).transpose();
  return out;
}

PartnerSelection select_partners(const Eigen::MatrixXd& xk, const Eigen::VectorXd& a, int robot_nodes) {
  if (xk.cols() != a.size()) throw DimensionError("select_partners: attention vector length mismatch");
  if (robot_nodes <= 0 || robot_nodes >= xk.rows()) throw GraphStateError("select_partners: empty part");
  ad::Tape tape;
  const ad::Value scores = ad::matvec(tape.constant(xk), tape.constant(a));
  std::vector<int> seg(static_cast<std::size_t>(xk.rows()));
  for (Eigen::Index i = 0; i < xk.rows(); ++i) seg[static_cast<std::size_t>(i)] = i < robot_nodes ? 0 : 1;
  const Eigen::MatrixXd alpha = ad::segment_softmax(scores, seg, 2).value();
  PartnerSelection out;
  out.attention = alpha.col(0);
  out.robot_partner = 0;
  out.object_partner = robot_nodes;
  for (Eigen::Index i = 0; i < xk.rows(); ++i) {
    if (i < robot_nodes) {
      if (alpha(i, 0) > alpha(out.robot_partner, 0)) out.robot_partner = static_cast<int>(i);
    } else if (alpha(i, 0) > alpha(out.object_partner, 0)) {
      out.object_partner = static_cast<int>(i);
    }
  }
  return out;
}

Eigen::MatrixXd conv_layer(const ConnectedGraph& g, int k, const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk,
                           const ModelParams& params) {
  if (g.scheme() != ConnectorScheme::Sampled) throw GraphStateError("conv_layer needs sampled connector partners");
  if (g.robot_partner() < 0 || g.object_partner() < 0) throw GraphStateError("conv_layer: missing partner");
  if (k < 0 || k >= params.config.layers) throw IndexError("conv_layer: layer index out of range");
  if (x0.rows() != g.node_count() || x0.cols() != 2) throw DimensionError("conv_layer: layer-0 features must be n x 2");
  if (k > 0 && (xk.rows() != g.node_count() || xk.cols() != params.config.hidden))
    throw DimensionError("conv_layer: layer-k features must be n x hidden");
  SceneGraph scene = make_scene_graph(g);
  const SceneGraph* scenes[] = {&scene};
  const BatchLayout l = make_layout(scenes);
  std::vector<int> partner(static_cast<std::size_t>(g.node_count()));
  for (int i = 0; i < g.node_count(); ++i) partner[static_cast<std::size_t>(i)] = g.partner_of(i);
  ad::Tape tape;
  const TapeParams bound = bind(tape, params, false);
  const ad::Value v0 = tape.constant(x0);
  if (k == 0) return conv_on_tape(bound.encoders[0], params.config.slope, v0, nullptr, l, partner).value();
  const ad::Value vk = tape.constant(xk);
  return conv_on_tape(bound.encoders[static_cast<std::size_t>(k)], params.config.slope, v0, &vk, l, partner).value();
}

TapeParams bind(ad::Tape& tape, const ModelParams& params, bool trainable) {
  auto leaf = [&](const auto& m) -> ad::Value {
    Eigen::MatrixXd v = m;
    return trainable ? tape.variable(std::move(v)) : tape.constant(std::move(v));
  };
  TapeParams b;
  for (const Mlp& m : params.encoders) {
    auto& layers = b.encoders.emplace_back();
    for (const DenseLayer& d : m.layers) layers.emplace_back(leaf(d.weight), leaf(d.bias));
  }
  for (const auto& a : params.attention) b.attention.push_back(leaf(a));
  for (const DenseLayer& d : params.readout.layers) b.readout.emplace_back(leaf(d.weight), leaf(d.bias));
  return b;
}

Eigen::VectorXd collect_gradient(const ad::Tape& tape, const TapeParams& bound, const ModelParams& params) {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(params.parameter_count()));
  Eigen::Index offset = 0;
  auto put = [&](const ad::Value& v) { write_block(tape.grad(v), flat, offset); };
  for (const auto& layers : bound.encoders)
    for (const auto& [w, b] : layers) {
      put(w);
      put(b);
    }
  for (const auto& a : bound.attention) put(a);
  for (const auto& [w, b] : bound.readout) {
    put(w);
    put(b);
  }
  return flat;
}

ad::Value mlp_forward(const ad::Value& x, const std::vector<std::pair<ad::Value, ad::Value>>& layers, double slope) {
  ad::Value h = x;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    h = ad::affine(h, layers[l].first, layers[l].second);
    if (l + 1 < layers.size()) h = ad::leaky_relu(h, slope);
  }
  return h;
}

Eigen::MatrixXd stack_coords(std::span<const SceneGraph* const> scenes) {
  Eigen::Index n = 0;
  for (const SceneGraph* s : scenes) n += s->coords.rows();
  Eigen::MatrixXd out(n, 2);
  Eigen::Index r = 0;
  for (const SceneGraph* s : scenes) {
    out.middleRows(r, s->coords.rows()) = s->coords;
    r += s->coords.rows();
  }
  return out;
}

ad::Value forward_batch(ad::Tape& tape, const TapeParams& bound, const ModelConfig& config,
                        std::span<const SceneGraph* const> scenes, std::span<const PartnerPair> initial,
                        const ad::Value& coords, std::vector<LayerTrace>* traces) {
  if (scenes.empty()) throw DimensionError("forward_batch needs at least one scene");
  if (initial.size() != scenes.size()) throw DimensionError("one initial partner pair per scene is required");
  if (coords.tape() != &tape) throw TapeError("coordinates belong to another tape");
  const BatchLayout l = make_layout(scenes);
  if (coords.rows() != l.nodes || coords.cols() != 2)
    throw DimensionError("coordinates must be " + std::to_string(l.nodes) + "x2");
  if (static_cast<int>(bound.encoders.size()) != config.layers) throw DimensionError("bound parameters do not match K");

  const std::size_t b = scenes.size();
  std::vector<int> robot_partner(b), object_partner(b);
  for (std::size_t s = 0; s < b; ++s) {
    const auto [r, o] = initial[s];
    const SceneGraph& g = *scenes[s];
    if (r < 0 || r >= g.robot_nodes || o < 0 || o >= g.object_nodes) throw IndexError("initial partner out of range");
    robot_partner[s] = l.offset[s] + r;
    object_partner[s] = l.offset[s] + g.robot_nodes + o;
  }
  if (traces) {
    traces->assign(b, LayerTrace{});
    for (std::size_t s = 0; s < b; ++s)
      (*traces)[s].features.push_back(coords.value().middleRows(l.offset[s], scenes[s]->node_count()));
  }

  std::vector<ad::Value> robot_summaries, object_summaries;
  ad::Value xk;
  for (int k = 0; k < config.layers; ++k) {
    if (traces)
      for (std::size_t s = 0; s < b; ++s)
        (*traces)[s].partners.emplace_back(robot_partner[s] - l.offset[s], object_partner[s] - l.offset[s]);
    const std::vector<int> partner = partner_per_node(robot_partner, object_partner, l);
    const auto& encoder = bound.encoders[static_cast<std::size_t>(k)];
    xk = conv_on_tape(encoder, config.slope, coords, k == 0 ? nullptr : &xk, l, partner);

    const ad::Value scores = ad::matvec(xk, bound.attention[static_cast<std::size_t>(k)]);
    const ad::Value alpha = ad::segment_softmax(scores, l.segment, l.segments);
    const std::vector<int> best = segment_argmax(alpha.value(), l);
    for (std::size_t s = 0; s < b; ++s) {
      robot_partner[s] = best[2 * s];
      object_partner[s] = best[2 * s + 1];
    }
    const ad::Value pooled =
        ad::leaky_relu(ad::scatter_add_rows(ad::scale_rows(xk, alpha), l.segment, l.segments), config.slope);
    robot_summaries.push_back(ad::gather_rows(pooled, l.robot_segments));
    object_summaries.push_back(ad::gather_rows(pooled, l.object_segments));

    if (traces) {
      for (std::size_t s = 0; s < b; ++s) {
        LayerTrace& t = (*traces)[s];
        const int off = l.offset[s], n = scenes[s]->node_count();
        t.features.push_back(xk.value().middleRows(off, n));
        t.attention.push_back(alpha.value().col(0).segment(off, n));
        t.robot_summary.push_back(pooled.value().row(static_cast<Eigen::Index>(2 * s)).transpose());
        t.object_summary.push_back(pooled.value().row(static_cast<Eigen::Index>(2 * s + 1)).transpose());
        t.final_partners = {robot_partner[s] - off, object_partner[s] - off};
      }
    }
  }
  const ad::Value pooled_parts[] = {ad::elementwise_max(robot_summaries), ad::elementwise_max(object_summaries)};
  return mlp_forward(ad::concat_cols(pooled_parts), bound.readout, config.slope);
}

}  // namespace model

GraphDistNet::GraphDistNet(ModelParams params) : params_(std::move(params)) { params_.validate(); }

Prediction GraphDistNet::forward(const SceneGraph& scene, PartnerPair initial) const {
  ad::Tape tape;
  const model::TapeParams bound = model::bind(tape, params_, false);
  const SceneGraph* scenes[] = {&scene};
  const PartnerPair partners[] = {initial};
  std::vector<LayerTrace> traces;
  const ad::Value out =
      model::forward_batch(tape, bound, params_.config, scenes, partners, tape.constant(scene.coords), &traces);
  return {out.value()(0, 0), std::move(traces.front())};
}

Prediction GraphDistNet::forward(std::span<const Polygon2d> robot, std::span<const Polygon2d> obstacles,
                                 std::uint64_t seed) const {
  const SceneGraph scene = make_scene_graph(robot, obstacles);
  return forward(scene, initial_partners(scene, seed));
}

double GraphDistNet::predict(std::span<const Polygon2d> robot, std::span<const Polygon2d> obstacles,
                             std::uint64_t seed) const {
  return forward(robot, obstacles, seed).distance;
}

std::vector<double> GraphDistNet::predict_batch(std::span<const SceneGraph* const> scenes,
                                                std::span<const std::uint64_t> seeds) const {
  if (scenes.size() != seeds.size()) throw DimensionError("predict_batch: one seed per scene is required");
  constexpr std::size_t kChunk = 64;
  std::vector<double> out;
  out.reserve(scenes.size());
  for (std::size_t start = 0; start < scenes.size(); start += kChunk) {
    const std::size_t end = std::min(scenes.size(), start + kChunk);
    const auto chunk = scenes.subspan(start, end - start);
    std::vector<PartnerPair> partners;
    for (std::size_t i = start; i < end; ++i) partners.push_back(initial_partners(*scenes[i], seeds[i]));
    ad::Tape tape;
    const model::TapeParams bound = model::bind(tape, params_, false);
    const ad::Value d = model::forward_batch(tape, bound, params_.config, chunk, partners,
                                             tape.constant(model::stack_coords(chunk)));
    for (Eigen::Index i = 0; i < d.rows(); ++i) out.push_back(d.value()(i, 0));
  }
  return out;
}

ad::Value robot_coords_on_tape(ad::Tape& tape, const PlanarArm& arm, std::span<const ad::Value> joints) {
  if (joints.empty()) throw DimensionError("robot_coords_on_tape: no joints");
  for (const ad::Value& q : joints)
    if (q.tape() != &tape) throw TapeError("joint values belong to another tape");
  const auto corners = link_corners<ad::Value>(arm, joints);
  std::vector<ad::Value> flat;
  flat.reserve(corners.size() * 8);
  for (const auto& c : corners) flat.insert(flat.end(), c.begin(), c.end());
  return ad::assemble(flat, static_cast<Eigen::Index>(corners.size() * 4), 2);
}

JointGradient GraphDistNet::gradient_wrt_joints(const PlanarArm& arm, std::span<const double> joints,
                                                std::span<const Polygon2d> obstacles, std::uint64_t seed) const {
  const std::vector<Polygon2d> links = forward_kinematics(arm, joints);
  const SceneGraph scene = make_scene_graph(links, obstacles);
  ad::Tape tape;
  std::vector<ad::Value> q;
  for (double v : joints) q.push_back(tape.variable(v));
  const ad::Value robot = robot_coords_on_tape(tape, arm, q);
  const ad::Value parts[] = {robot, tape.constant(scene.coords.bottomRows(scene.object_nodes))};
  const ad::Value coords = ad::concat_rows(parts);
  const model::TapeParams bound = model::bind(tape, params_, false);
  const SceneGraph* scenes[] = {&scene};
  const PartnerPair partners[] = {initial_partners(scene, seed)};
  const ad::Value d = model::forward_batch(tape, bound, params_.config, scenes, partners, coords);
  const ad::Value root = ad::sum(d);
  tape.backward(root);
  JointGradient out;
  out.distance = d.value()(0, 0);
  out.gradient.resize(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) out.gradient(static_cast<Eigen::Index>(i)) = tape.grad(q[i])(0, 0);
  return out;
}

}  // namespace graphdist
