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

#include "graphdist/training.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "graphdist/metrics.hpp"
#include "graphdist/parallel.hpp"

namespace graphdist {

namespace {

constexpr std::uint64_t kPartnerStream = 0x7061727472;
constexpr std::uint64_t kShuffleStream = 0x73687566;
constexpr std::uint64_t kInitStream = 0x696e6974;
constexpr std::uint64_t kAcdStream = 0x616364;
constexpr std::size_t kEvalChunk = 64;

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

struct ShardResult {
  Eigen::VectorXd grad;
  double sse = 0;
};

// Squared error summed over the shard; gradient of sse * weight.
ShardResult shard_step(const ModelParams& params, std::span<const SceneGraph* const> scenes,
                       std::span<const PartnerPair> partners, std::span<const double> labels, double weight) {
  ad::Tape tape;
  const model::TapeParams bound = model::bind(tape, params, true);
  const ad::Value d = model::forward_batch(tape, bound, params.config, scenes, partners,
                                           tape.constant(model::stack_coords(scenes)));
  Eigen::MatrixXd y(static_cast<Eigen::Index>(labels.size()), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) y(static_cast<Eigen::Index>(i), 0) = labels[i];
  const ad::Value sse = ad::sum(ad::square(d - tape.constant(std::move(y))));
  tape.backward(ad::scale(sse, weight));
  return {model::collect_gradient(tape, bound, params), sse.scalar()};
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (shard_size < 1) throw ConfigError("shard_size must be positive");
  if (!(val_fraction >= 0 && val_fraction < 1)) throw ConfigError("val_fraction must lie in [0, 1)");
  if (!(lr_decay > 0 && lr_decay <= 1)) throw ConfigError("lr_decay must lie in (0, 1]");
  if (loss != "mse") throw ConfigError("unsupported loss '" + loss + "'");
  if (model.layers < 1 || model.hidden < 1 || model.mlp_width < 1 || model.mlp_hidden_layers < 0)
    throw ConfigError("model dimensions must be positive");
  adam.validate();
}

TrainConfig TrainConfig::from_config(const KeyValueConfig& kv) {
  static const std::set<std::string> known = {
      "epochs", "batch_size", "lr",    "beta1",     "beta2",      "eps",  "lr_decay",          "seed",
      "val_fraction", "shard_size", "resample_partners", "loss", "K", "d_h", "mlp_width", "mlp_hidden_layers",
      "slope"};
  for (const auto& [key, value] : kv.values())
    if (!known.count(key)) throw ConfigError("unknown training config key '" + key + "'");
  TrainConfig c;
  c.epochs = kv.get_int("epochs", c.epochs);
  c.batch_size = kv.get_int("batch_size", c.batch_size);
  c.adam.lr = kv.get_double("lr", c.adam.lr);
  c.adam.beta1 = kv.get_double("beta1", c.adam.beta1);
  c.adam.beta2 = kv.get_double("beta2", c.adam.beta2);
  c.adam.eps = kv.get_double("eps", c.adam.eps);
  c.lr_decay = kv.get_double("lr_decay", c.lr_decay);
  c.seed = kv.get_uint("seed", c.seed);
  c.val_fraction = kv.get_double("val_fraction", c.val_fraction);
  c.shard_size = kv.get_int("shard_size", c.shard_size);
  c.resample_partners = kv.get_bool("resample_partners", c.resample_partners);
  c.loss = kv.get_string("loss", c.loss);
  c.model.layers = kv.get_int("K", c.model.layers);
  c.model.hidden = kv.get_int("d_h", c.model.hidden);
  c.model.mlp_width = kv.get_int("mlp_width", c.model.mlp_width);
  c.model.mlp_hidden_layers = kv.get_int("mlp_hidden_layers", c.model.mlp_hidden_layers);
  c.model.slope = kv.get_double("slope", c.model.slope);
  c.validate();
  return c;
}

KeyValueConfig TrainConfig::to_config() const {
  KeyValueConfig kv;
  kv.set("epochs", std::to_string(epochs));
  kv.set("batch_size", std::to_string(batch_size));
  kv.set("lr", format_double(adam.lr));
  kv.set("beta1", format_double(adam.beta1));
  kv.set("beta2", format_double(adam.beta2));
  kv.set("eps", format_double(adam.eps));
  kv.set("lr_decay", format_double(lr_decay));
  kv.set("seed", std::to_string(seed));
  kv.set("val_fraction", format_double(val_fraction));
  kv.set("shard_size", std::to_string(shard_size));
  kv.set("resample_partners", resample_partners ? "true" : "false");
  kv.set("loss", loss);
  kv.set("K", std::to_string(model.layers));
  kv.set("d_h", std::to_string(model.hidden));
  kv.set("mlp_width", std::to_string(model.mlp_width));
  kv.set("mlp_hidden_layers", std::to_string(model.mlp_hidden_layers));
  kv.set("slope", format_double(model.slope));
  return kv;
}

std::uint64_t partner_seed(std::uint64_t seed, std::size_t index) { return derive_seed(seed, {kPartnerStream, index}); }

std::vector<SceneGraph> scene_graphs(std::span<const Sample> samples) {
  std::vector<SceneGraph> out(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const std::vector<Polygon2d> robot = samples[i].robot();
    out[i] = make_scene_graph(robot, samples[i].obstacles);
  });
  return out;
}

double dataset_mse(const GraphDistNet& net, std::span<const Sample> samples, std::span<const SceneGraph> scenes,
                   std::uint64_t seed) {
  if (samples.size() != scenes.size()) throw DimensionError("dataset_mse: one scene per sample is required");
  if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t chunks = (samples.size() + kEvalChunk - 1) / kEvalChunk;
  std::vector<double> sse(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kEvalChunk, end = std::min(samples.size(), begin + kEvalChunk);
    std::vector<const SceneGraph*> ptrs;
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = begin; i < end; ++i) {
      ptrs.push_back(&scenes[i]);
      seeds.push_back(partner_seed(seed, i));
    }
    const std::vector<double> d = net.predict_batch(ptrs, seeds);
    for (std::size_t i = begin; i < end; ++i) sse[c] += (d[i - begin] - samples[i].label) * (d[i - begin] - samples[i].label);
  });
  return std::accumulate(sse.begin(), sse.end(), 0.0) / static_cast<double>(samples.size());
}

TrainResult train(std::span<const Sample> dataset, const TrainConfig& config,
                  const std::function<void(const EpochLoss&)>& on_epoch) {
  config.validate();
  if (dataset.empty()) throw PreconditionError("train: empty dataset");

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(derive_seed(config.seed, {kShuffleStream}));
  shuffle(order, split_rng);
  const auto n_val = static_cast<std::size_t>(std::floor(config.val_fraction * static_cast<double>(dataset.size())));
  if (n_val == dataset.size()) throw PreconditionError("train: validation split leaves no training samples");
  std::vector<Sample> val_samples;
  for (std::size_t i = 0; i < n_val; ++i) val_samples.push_back(dataset[order[i]]);
  std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());

  const std::vector<SceneGraph> scenes = scene_graphs(dataset);
  std::vector<SceneGraph> val_scenes;
  for (std::size_t i = 0; i < n_val; ++i) val_scenes.push_back(scenes[order[i]]);

  TrainResult result;
  result.params = ModelParams::initialize(config.model, derive_seed(config.seed, {kInitStream}));
  Eigen::VectorXd theta = result.params.flatten();
  Adam<double> adam(theta.size(), config.adam);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(derive_seed(config.seed, {kShuffleStream, static_cast<std::uint64_t>(epoch) + 1}));
    shuffle(train_idx, rng);
    const double lr = config.adam.lr * std::pow(config.lr_decay, epoch);
    double epoch_sse = 0;
    for (std::size_t start = 0; start < train_idx.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(train_idx.size(), start + static_cast<std::size_t>(config.batch_size));
      const std::size_t bsize = end - start;
      const auto shard = static_cast<std::size_t>(config.shard_size);
      const std::size_t shards = (bsize + shard - 1) / shard;
      std::vector<ShardResult> parts(shards);
      parallel_for(shards, [&](std::size_t s) {
        std::vector<const SceneGraph*> ptrs;
        std::vector<PartnerPair> partners;
        std::vector<double> labels;
        for (std::size_t t = start + s * shard; t < std::min(end, start + (s + 1) * shard); ++t) {
          const std::size_t i = train_idx[t];
          ptrs.push_back(&scenes[i]);
          const std::uint64_t ps = config.resample_partners
                                       ? derive_seed(config.seed, {kPartnerStream, static_cast<std::uint64_t>(epoch), i})
                                       : derive_seed(config.seed, {kPartnerStream, i});
          partners.push_back(initial_partners(scenes[i], ps));
          labels.push_back(dataset[i].label);
        }
        parts[s] = shard_step(result.params, ptrs, partners, labels, 1.0 / static_cast<double>(bsize));
      });
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
      double batch_sse = 0;
      for (const ShardResult& p : parts) {
        grad += p.grad;
        batch_sse += p.sse;
      }
      if (!std::isfinite(batch_sse) || !grad.allFinite())
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch starting at " +
                           std::to_string(start) + ": loss " + format_double(batch_sse / static_cast<double>(bsize)));
      adam.step(theta, grad, lr);
      result.params.assign(theta);
      epoch_sse += batch_sse;
    }
    EpochLoss e;
    e.epoch = epoch + 1;
    e.train_mse = epoch_sse / static_cast<double>(train_idx.size());
    e.val_mse = n_val == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : dataset_mse(GraphDistNet(result.params), val_samples, val_scenes, config.seed);
    if (!std::isfinite(e.train_mse))
      throw NumericError("training loss is not finite after epoch " + std::to_string(e.epoch));
    result.curve.push_back(e);
    if (on_epoch) on_epoch(e);
  }
  return result;
}

void write_loss_csv(std::ostream& out, const std::vector<EpochLoss>& curve) {
  out << "epoch,train_mse,val_mse\n";
  for (const EpochLoss& e : curve)
    out << e.epoch << ',' << format_double(e.train_mse) << ',' << (std::isnan(e.val_mse) ? "nan" : format_double(e.val_mse))
        << '\n';
}

std::vector<EpochLoss> read_loss_csv(std::istream& in) {
  std::vector<EpochLoss> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1) {
      if (line != "epoch,train_mse,val_mse") throw FormatError("loss csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw FormatError("loss csv line " + std::to_string(number) + ": expected three fields");
    try {
      EpochLoss e;
      e.epoch = std::stoi(a);
      e.train_mse = std::stod(b);
      e.val_mse = c == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(c);
      out.push_back(e);
    } catch (const std::exception&) {
      throw FormatError("loss csv line " + std::to_string(number) + ": bad number");
    }
  }
  return out;
}

std::vector<double> ModelEstimator::predict(std::span<const Sample> samples) const {
  const std::vector<SceneGraph> scenes = scene_graphs(samples);
  const std::size_t chunks = (samples.size() + kEvalChunk - 1) / kEvalChunk;
  std::vector<double> out(samples.size());
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kEvalChunk, end = std::min(samples.size(), begin + kEvalChunk);
    std::vector<const SceneGraph*> ptrs;
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = begin; i < end; ++i) {
      ptrs.push_back(&scenes[i]);
      seeds.push_back(partner_seed(seed_, i));
    }
    const std::vector<double> d = net_.predict_batch(ptrs, seeds);
    std::copy(d.begin(), d.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
  });
  return out;
}

Eigen::VectorXd ModelEstimator::gradient(const PlanarArm& arm, std::span<const double> joints,
                                         std::span<const Polygon2d> obstacles, std::uint64_t seed) const {
  return net_.gradient_wrt_joints(arm, joints, obstacles, seed).gradient;
}

Eigen::VectorXd oracle_gradient(const PlanarArm& arm, std::span<const double> joints,
                                std::span<const Polygon2d> obstacles, double step) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(joints.size()));
  std::vector<double> q(joints.begin(), joints.end());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double q0 = q[i];
    q[i] = q0 + step;
    const double up = label_for(arm, q, obstacles);
    q[i] = q0 - step;
    const double down = label_for(arm, q, obstacles);
    q[i] = q0;
    g(static_cast<Eigen::Index>(i)) = (up - down) / (2 * step);
  }
  return g;
}

std::vector<double> OracleEstimator::predict(std::span<const Sample> samples) const {
  std::vector<double> out(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    out[i] = label_for(samples[i].arm, samples[i].joints, samples[i].obstacles);
  });
  return out;
}

Eigen::VectorXd OracleEstimator::gradient(const PlanarArm& arm, std::span<const double> joints,
                                          std::span<const Polygon2d> obstacles, std::uint64_t) const {
  return oracle_gradient(arm, joints, obstacles, step_);
}

nlohmann::json Metrics::to_json() const {
  return {{"mae", mae}, {"auc", auc}, {"acd", acd}, {"mean_time_s", mean_time_s}, {"n", n}};
}

Metrics evaluate(const DistanceEstimator& estimator, std::span<const Sample> test, const EvalConfig& config) {
  if (test.empty()) throw PreconditionError("evaluate: empty test set");
  Metrics m;
  m.n = test.size();
  std::vector<double> truth(test.size());
  std::vector<bool> positive(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) truth[i] = test[i].label;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> predicted = estimator.predict(test);
  const auto t1 = std::chrono::steady_clock::now();
  m.mean_time_s = std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(test.size());
  m.mae = mean_absolute_error<double>(predicted, truth);

  std::vector<double> scores(test.size());
  std::unique_ptr<bool[]> labels(new bool[test.size()]);
  for (std::size_t i = 0; i < test.size(); ++i) {
    scores[i] = -predicted[i];
    labels[i] = test[i].label <= 0;
  }
  m.auc = roc_auc<double>(scores, std::span<const bool>(labels.get(), test.size()));

  const auto configs = static_cast<std::size_t>(std::max(0, config.acd_configs));
  std::vector<double> distances(configs, 0.0);
  parallel_for(configs, [&](std::size_t c) {
    const Sample& s = test[c % test.size()];
    Rng rng(derive_seed(config.seed, {kAcdStream, c}));
    std::vector<double> q(s.arm.dof());
    for (int attempt = 0;; ++attempt) {
      for (double& v : q) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
      if (std::abs(label_for(s.arm, q, s.obstacles)) >= config.contact_band) break;
      if (attempt > 10000) throw PreconditionError("evaluate: no configuration away from contact");
    }
    const Eigen::VectorXd truth_grad = oracle_gradient(s.arm, q, s.obstacles, config.fd_step);
    const Eigen::VectorXd est = estimator.gradient(s.arm, q, s.obstacles, partner_seed(config.seed, c));
    distances[c] = cosine_distance(est, truth_grad);
  });
  m.acd = configs == 0 ? 0.0 : std::accumulate(distances.begin(), distances.end(), 0.0) / static_cast<double>(configs);
  return m;
}

}  // namespace graphdist
