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

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "graphdist/config.hpp"
#include "graphdist/dataset.hpp"
#include "graphdist/metrics.hpp"
#include "graphdist/optimizer.hpp"
#include "graphdist/parallel.hpp"
#include "graphdist/training.hpp"

namespace graphdist {
namespace {

// Pairwise count of correctly ordered (positive, negative) pairs, ties as half.
double pairwise_auc(const std::vector<double>& s, const std::vector<bool>& pos) {
  double good = 0, total = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (pos[i] && !pos[j]) {
        total += 1;
        good += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
      }
  return good / total;
}

double auc(const std::vector<double>& s, const std::vector<bool>& pos) {
  const std::unique_ptr<bool[]> flags(new bool[pos.size()]);
  for (std::size_t i = 0; i < pos.size(); ++i) flags[i] = pos[i];
  return roc_auc<double>(s, std::span<const bool>(flags.get(), pos.size()));
}

TEST(MetricsTest, AucExamples) {
  EXPECT_DOUBLE_EQ(auc({0.9, 0.8, 0.2, 0.1}, {true, true, false, false}), 1.0);
  EXPECT_DOUBLE_EQ(auc({0.1, 0.2, 0.8, 0.9}, {true, true, false, false}), 0.0);
  EXPECT_DOUBLE_EQ(auc({0.5, 0.5, 0.5, 0.5}, {true, false, true, false}), 0.5);
  EXPECT_THROW(auc({0.1, 0.2}, {true, true}), PreconditionError);
}

TEST(MetricsTest, AucMatchesPairwiseCountAndIsRankInvariant) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> s(60);
    std::vector<bool> pos(60);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = std::round(rng.uniform(0, 10)) / 10;  // coarse values force ties
      pos[i] = rng.uniform(0, 1) < 0.4;
    }
    pos[0] = true;
    pos[1] = false;
    const double a = auc(s, pos);
    EXPECT_NEAR(a, pairwise_auc(s, pos), 1e-12);
    std::vector<double> warped = s;
    for (double& v : warped) v = std::exp(3 * v) - 7;
    EXPECT_NEAR(auc(warped, pos), a, 1e-12);
  }
}

TEST(MetricsTest, MaeAndCosine) {
  const std::vector<double> a{1, 2, 3}, b{1, 4, 0};
  EXPECT_DOUBLE_EQ(mean_absolute_error<double>(a, b), 5.0 / 3);
  EXPECT_DOUBLE_EQ(mean_absolute_error<double>(a, a), 0.0);
  EXPECT_THROW(mean_absolute_error<double>(a, std::vector<double>{1}), DimensionError);
  const Eigen::Vector2d x(1, 0), y(0, 1);
  EXPECT_DOUBLE_EQ(cosine_distance(x, x), 0.0);
  EXPECT_DOUBLE_EQ(cosine_distance(x, y), 1.0);
  EXPECT_DOUBLE_EQ(cosine_distance(x, Eigen::Vector2d(-1, 0)), 2.0);
  EXPECT_DOUBLE_EQ(cosine_distance(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()), 0.0);
  EXPECT_DOUBLE_EQ(cosine_distance(x, Eigen::Vector2d::Zero()), 1.0);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d u(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Eigen::Vector3d v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double d = cosine_distance(u, v);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 2.0);
    EXPECT_NEAR(cosine_distance(u, 2.5 * u), 0.0, 1e-12);
  }
}

TEST(AdamTest, FirstStepHasLearningRateMagnitude) {
  Adam<double> adam(2, AdamConfig{0.1, 0.9, 0.999, 1e-8});
  Eigen::VectorXd x(2);
  x << 1, -1;
  Eigen::VectorXd g(2);
  g << 3, -0.001;
  adam.step(x, g);
  EXPECT_NEAR(x(0), 0.9, 1e-6);
  EXPECT_NEAR(x(1), -0.9, 1e-4);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(AdamTest, MinimizesQuadratic) {
  Adam<double> adam(3, AdamConfig{0.05, 0.9, 0.999, 1e-8});
  Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 2.0);
  const Eigen::Vector3d target(1, -2, 0.5);
  for (int i = 0; i < 2000; ++i) {
    const Eigen::VectorXd g = 2 * (x - target);
    adam.step(x, g);
  }
  EXPECT_LT((x - target).norm(), 1e-3);
}

TEST(DatasetTest, EmptyAndDeterministic) {
  EXPECT_TRUE(generate_dataset('a', 0, 1).empty());
  const auto a = generate_dataset('b', 20, 7);
  const auto b = generate_dataset('b', 20, 7);
  std::ostringstream sa, sb;
  write_dataset(sa, a);
  write_dataset(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NE(sa.str(), [] {
    std::ostringstream s;
    write_dataset(s, generate_dataset('b', 20, 8));
    return s.str();
  }());
}

TEST(DatasetTest, FixedKindSharesObstaclesAndLabelsReproduce) {
  const auto samples = generate_dataset('a', 30, 2);
  for (const Sample& s : samples) {
    ASSERT_EQ(s.obstacles.size(), samples[0].obstacles.size());
    for (std::size_t k = 0; k < s.obstacles.size(); ++k)
      EXPECT_EQ(s.obstacles[k].vertices(), samples[0].obstacles[k].vertices());
    EXPECT_EQ(s.label, label_for(s.arm, s.joints, s.obstacles));
    for (double q : s.joints) {
      EXPECT_GE(q, -std::numbers::pi);
      EXPECT_LE(q, std::numbers::pi);
    }
  }
}

TEST(DatasetTest, JsonlRoundTripAndLineNumbers) {
  const auto samples = generate_dataset('d', 4, 3);
  std::ostringstream out;
  write_dataset(out, samples);
  std::istringstream in(out.str());
  const auto back = read_dataset(in);
  ASSERT_EQ(back.size(), samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].joints, samples[i].joints);
    EXPECT_EQ(back[i].label, samples[i].label);
  }
  std::istringstream broken(out.str() + "{\"kind\": \"a\"\n");
  try {
    read_dataset(broken, "data.jsonl");
    FAIL() << "expected a format error";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("data.jsonl:5"), std::string::npos) << e.what();
  }
}

TEST(LossCsvTest, RoundTrip) {
  const std::vector<EpochLoss> curve{{1, 0.5, 0.25}, {2, 0.125, std::nan("")}};
  std::ostringstream out;
  write_loss_csv(out, curve);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "epoch,train_mse,val_mse");
  std::istringstream in(out.str());
  const auto back = read_loss_csv(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].epoch, 1);
  EXPECT_DOUBLE_EQ(back[0].val_mse, 0.25);
  EXPECT_DOUBLE_EQ(back[1].train_mse, 0.125);
  EXPECT_TRUE(std::isnan(back[1].val_mse));
}

TEST(TrainConfigTest, ParsesKnownKeysAndRejectsOthers) {
  const TrainConfig c = TrainConfig::from_config(KeyValueConfig::parse("epochs = 3\nlr = 0.01\nd_h = 8\nseed = 4\n"));
  EXPECT_EQ(c.epochs, 3);
  EXPECT_DOUBLE_EQ(c.adam.lr, 0.01);
  EXPECT_EQ(c.model.hidden, 8);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_THROW(TrainConfig::from_config(KeyValueConfig::parse("epoch = 3\n")), ConfigError);
  EXPECT_THROW(TrainConfig::from_config(KeyValueConfig::parse("batch_size = 0\n")), ConfigError);
  EXPECT_THROW(TrainConfig::from_config(KeyValueConfig::parse("lr = abc\n")), ConfigError);
  const TrainConfig d = TrainConfig::from_config(c.to_config());
  EXPECT_EQ(d.epochs, c.epochs);
  EXPECT_EQ(d.model, c.model);
}

TrainConfig tiny_config() {
  TrainConfig c;
  c.epochs = 2;
  c.batch_size = 8;
  c.model.hidden = 8;
  c.model.mlp_width = 8;
  c.model.mlp_hidden_layers = 1;
  c.seed = 5;
  return c;
}

TEST(TrainTest, DeterministicAcrossRunsAndThreadCounts) {
  const auto data = generate_dataset('b', 40, 9);
  const TrainConfig c = tiny_config();
  const char* saved = std::getenv("GRAPHDIST_THREADS");
  const std::string restore = saved ? saved : "";
  setenv("GRAPHDIST_THREADS", "1", 1);
  const TrainResult one = train(data, c);
  setenv("GRAPHDIST_THREADS", "3", 1);
  const TrainResult three = train(data, c);
  const TrainResult again = train(data, c);
  if (saved)
    setenv("GRAPHDIST_THREADS", restore.c_str(), 1);
  else
    unsetenv("GRAPHDIST_THREADS");
  EXPECT_EQ(one.params.flatten(), three.params.flatten());
  EXPECT_EQ(three.params.flatten(), again.params.flatten());
  ASSERT_EQ(one.curve.size(), 2u);
  EXPECT_EQ(one.curve[1].train_mse, three.curve[1].train_mse);
  EXPECT_EQ(one.curve[1].val_mse, three.curve[1].val_mse);
}

TEST(TrainTest, LossDecreasesOnSmallSet) {
  const auto data = generate_dataset('a', 64, 10);
  TrainConfig c = tiny_config();
  c.epochs = 15;
  c.val_fraction = 0;
  c.adam.lr = 3e-3;
  const TrainResult r = train(data, c);
  EXPECT_TRUE(std::isnan(r.curve.back().val_mse));
  EXPECT_LT(r.curve.back().train_mse, r.curve.front().train_mse);
}

TEST(TrainTest, RejectsEmptyDataset) {
  EXPECT_THROW(train(std::vector<Sample>{}, tiny_config()), PreconditionError);
}

TEST(EvaluateTest, OracleScoresPerfectly) {
  const auto test = generate_dataset('b', 120, 11);
  EvalConfig ec;
  ec.acd_configs = 10;
  const Metrics m = evaluate(OracleEstimator(), test, ec);
  EXPECT_EQ(m.n, 120u);
  EXPECT_DOUBLE_EQ(m.mae, 0.0);
  EXPECT_DOUBLE_EQ(m.auc, 1.0);
  EXPECT_DOUBLE_EQ(m.acd, 0.0);
}

TEST(EvaluateTest, SingleClassSetIsAnError) {
  auto test = generate_dataset('a', 20, 12);
  std::erase_if(test, [](const Sample& s) { return s.label <= 0; });
  EvalConfig ec;
  ec.acd_configs = 1;
  EXPECT_THROW(evaluate(OracleEstimator(), test, ec), PreconditionError);
}

TEST(EvaluateTest, OracleGradientIsStableInStepSize) {
  const auto samples = generate_dataset('b', 1, 13);
  const Sample& s = samples[0];
  const Eigen::VectorXd g = oracle_gradient(s.arm, s.joints, s.obstacles, 1e-5);
  const Eigen::VectorXd g2 = oracle_gradient(s.arm, s.joints, s.obstacles, 1e-6);
  ASSERT_EQ(g.size(), 2);
  EXPECT_LT((g - g2).norm(), 1e-4 * std::max(1.0, g.norm()));
}

}  // namespace
}  // namespace graphdist
