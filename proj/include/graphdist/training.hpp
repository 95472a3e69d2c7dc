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

#ifndef GRAPHDIST_TRAINING_HPP
#define GRAPHDIST_TRAINING_HPP

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "graphdist/config.hpp"
#include "graphdist/dataset.hpp"
#include "graphdist/model.hpp"
#include "graphdist/optimizer.hpp"

namespace graphdist {

struct TrainConfig {
  int epochs = 200;
  int batch_size = 64;
  AdamConfig adam;
  // Step size at epoch e is adam.lr * lr_decay^e.
  double lr_decay = 1.0;
  std::uint64_t seed = 0;
  double val_fraction = 0.1;
  // Samples per tape inside a batch; shard gradients are summed in order.
  int shard_size = 16;
  // Draw fresh initial partners every epoch instead of once per sample.
  bool resample_partners = true;
  std::string loss = "mse";
  ModelConfig model;

  void validate() const;
  static TrainConfig from_config(const KeyValueConfig& kv);
  KeyValueConfig to_config() const;
};

struct EpochLoss {
  int epoch = 0;
  double train_mse = 0;
  double val_mse = 0;  // NaN without a validation split
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLoss> curve;
};

// Initial-partner seed for sample `index`, used by evaluation and validation.
std::uint64_t partner_seed(std::uint64_t seed, std::size_t index);

std::vector<SceneGraph> scene_graphs(std::span<const Sample> samples);

/// Minimizes the mean squared error of d-hat against the labels with Adam.
/// Deterministic given config.seed, independent of the thread count. Throws
/// NumericError when the loss stops being finite.
TrainResult train(std::span<const Sample> dataset, const TrainConfig& config,
                  const std::function<void(const EpochLoss&)>& on_epoch = {});

// Mean squared error of the model on `samples` with evaluation partners.
double dataset_mse(const GraphDistNet& net, std::span<const Sample> samples, std::span<const SceneGraph> scenes,
                   std::uint64_t seed);

void write_loss_csv(std::ostream& out, const std::vector<EpochLoss>& curve);
std::vector<EpochLoss> read_loss_csv(std::istream& in);

class DistanceEstimator {
 public:
  virtual ~DistanceEstimator() = default;
  virtual std::vector<double> predict(std::span<const Sample> samples) const = 0;
  virtual Eigen::VectorXd gradient(const PlanarArm& arm, std::span<const double> joints,
                                   std::span<const Polygon2d> obstacles, std::uint64_t seed) const = 0;
};

class ModelEstimator : public DistanceEstimator {
 public:
  explicit ModelEstimator(GraphDistNet net, std::uint64_t seed = 0) : net_(std::move(net)), seed_(seed) {}
  std::vector<double> predict(std::span<const Sample> samples) const override;
  Eigen::VectorXd gradient(const PlanarArm& arm, std::span<const double> joints, std::span<const Polygon2d> obstacles,
                           std::uint64_t seed) const override;

 private:
  GraphDistNet net_;
  std::uint64_t seed_;
};

// Exact geometry; gradients by central differences.
class OracleEstimator : public DistanceEstimator {
 public:
  explicit OracleEstimator(double step = 1e-5) : step_(step) {}
  std::vector<double> predict(std::span<const Sample> samples) const override;
  Eigen::VectorXd gradient(const PlanarArm& arm, std::span<const double> joints, std::span<const Polygon2d> obstacles,
                           std::uint64_t seed) const override;

 private:
  double step_;
};

Eigen::VectorXd oracle_gradient(const PlanarArm& arm, std::span<const double> joints,
                                std::span<const Polygon2d> obstacles, double step);

struct EvalConfig {
  int acd_configs = 100;
  double fd_step = 1e-5;
  // Gradient configurations closer than this to contact are redrawn.
  double contact_band = 1e-3;
  std::uint64_t seed = 0;
};

struct Metrics {
  double mae = 0;
  double auc = 0;
  double acd = 0;
  double mean_time_s = 0;
  std::size_t n = 0;

  nlohmann::json to_json() const;
};

/// MAE, ROC AUC of -d-hat against (d <= 0), and the mean cosine distance
/// between estimator and oracle joint gradients over random configurations
/// drawn in the test scenes.
Metrics evaluate(const DistanceEstimator& estimator, std::span<const Sample> test, const EvalConfig& config = {});

}  // namespace graphdist

#endif  // GRAPHDIST_TRAINING_HPP
