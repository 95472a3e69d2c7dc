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

#include <random>

#include "graphdist/autodiff.hpp"
#include "oracles.hpp"

namespace graphdist::ad {
namespace {

TEST(TapeTest, SquareDerivative) {
  Tape tape;
  const Value x = tape.variable(3.0);
  tape.backward(square(x));
  EXPECT_DOUBLE_EQ(tape.grad(x)(0, 0), 6.0);
}

TEST(TapeTest, ConstantRootGivesZeroGradients) {
  Tape tape;
  const Value x = tape.variable(2.0);
  const Value c = tape.constant(5.0);
  tape.backward(c);
  EXPECT_EQ(tape.grad(x)(0, 0), 0.0);
}

TEST(TapeTest, SumOfInputsGivesOnes) {
  Tape tape;
  const Value x = tape.variable(Eigen::MatrixXd::Random(3, 4));
  tape.backward(sum(x));
  EXPECT_TRUE(tape.grad(x).isApproxToConstant(1.0));
}

TEST(TapeTest, RejectsNonScalarRootAndDoubleBackward) {
  Tape tape;
  const Value x = tape.variable(Eigen::MatrixXd::Ones(2, 1));
  EXPECT_THROW(tape.backward(x), DimensionError);
  const Value s = sum(x);
  tape.backward(s);
  EXPECT_THROW(tape.backward(s), TapeError);
  tape.reset_gradients();
  EXPECT_NO_THROW(tape.backward(s));
}

TEST(TapeTest, CrossTapeMixingIsRejected) {
  Tape a, b;
  const Value x = a.variable(1.0), y = b.variable(2.0);
  EXPECT_THROW(add(x, y), TapeError);
}

TEST(TapeTest, ShapeMismatchIsRejected) {
  Tape tape;
  const Value a = tape.variable(Eigen::MatrixXd::Ones(2, 3));
  const Value b = tape.variable(Eigen::MatrixXd::Ones(3, 2));
  EXPECT_THROW(add(a, b), DimensionError);
  EXPECT_THROW(matmul(a, a), DimensionError);
  EXPECT_THROW(mul(a, b), DimensionError);
}

TEST(TapeTest, NonFiniteForwardIsReported) {
  Tape tape;
  const Value z = tape.variable(0.0);
  EXPECT_THROW(reciprocal(z), NumericError);
}

TEST(SoftmaxTest, EqualLogits) {
  Tape tape;
  const Value x = tape.variable(Eigen::MatrixXd::Constant(4, 1, 0.7));
  const Value y = softmax(x);
  EXPECT_TRUE(y.value().isApprox(Eigen::MatrixXd::Constant(4, 1, 0.25)));
  // Each Jacobian row sums to zero: d(sum_j y_j)/dx = 0 for any weighting of a single output.
  for (int i = 0; i < 4; ++i) {
    Tape t;
    const Value xi = t.variable(Eigen::MatrixXd::Constant(4, 1, 0.7));
    t.backward(slice(softmax(xi), i, 0, 1, 1));
    EXPECT_NEAR(t.grad(xi).sum(), 0.0, 1e-15);
  }
}

TEST(SoftmaxTest, SegmentsNormalizeIndependently) {
  Tape tape;
  Eigen::MatrixXd x(5, 1);
  x << 1, 2, 3, -1, 4;
  const std::vector<int> seg{0, 0, 1, 1, 1};
  const Value y = segment_softmax(tape.constant(x), seg, 2);
  EXPECT_NEAR(y.value()(0, 0) + y.value()(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(y.value()(2, 0) + y.value()(3, 0) + y.value()(4, 0), 1.0, 1e-15);
}

TEST(LeakyReluTest, SlopeAtKink) {
  for (double x0 : {-1.0, 0.0, 2.0}) {
    Tape tape;
    const Value x = tape.variable(x0);
    const Value y = leaky_relu(x, 0.2);
    tape.backward(y);
    EXPECT_DOUBLE_EQ(y.scalar(), x0 > 0 ? x0 : 0.2 * x0);
    EXPECT_DOUBLE_EQ(tape.grad(x)(0, 0), x0 > 0 ? 1.0 : 0.2);
  }
}

TEST(ElementwiseMaxTest, TiesRouteToFirst) {
  Tape tape;
  const Value a = tape.variable(Eigen::MatrixXd::Constant(1, 2, 1.0));
  const Value b = tape.variable(Eigen::MatrixXd::Constant(1, 2, 1.0));
  const Value parts[] = {a, b};
  tape.backward(sum(elementwise_max(parts)));
  EXPECT_TRUE(tape.grad(a).isApproxToConstant(1.0));
  EXPECT_TRUE(tape.grad(b).isZero());
}

// Random composite of every op; checked against central differences.
double composite(Tape& tape, const Value& x, const Value& w1, const Value& w2, Value* out = nullptr) {
  const Value h1 = leaky_relu(matmul(x, w1), 0.2);                        // 4x3
  const Value h2 = sin(h1) + cos(scale(h1, 0.5)) * tape.constant(2.0);    // 4x3
  const Value h3 = affine(h2, w2, tape.constant(Eigen::MatrixXd::Constant(1, 2, 0.1)));  // 4x2
  const Value parts[] = {h3, square(h3)};
  const Value h4 = concat_cols(parts);                                     // 4x4
  const Value sm = softmax(matvec(h4, tape.constant(Eigen::VectorXd::LinSpaced(4, -1, 1))));  // 4x1
  const Value pooled = scale_rows(h4, sm);
  const std::vector<int> idx{0, 1, 0, 1};
  const Value scat = scatter_add_rows(pooled, idx, 2);                     // 2x4
  const Value rows[] = {slice(scat, 0, 0, 1, 4), slice(scat, 1, 0, 1, 4)};
  const Value mx = elementwise_max(rows);
  const Value g = gather_rows(h4, std::vector<int>{3, 1});
  const Value r = sum(mx) + dot(slice(g, 0, 0, 1, 4), slice(g, 1, 0, 1, 4)) +
                  sum(reciprocal(shift(square(h3), 1.0))) + mean(concat_rows(parts));
  if (out) *out = r;
  return r.scalar();
}

TEST(GradientTest, CompositeMatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd x(4, 2), w1(2, 3), w2(3, 2);
    for (auto* m : {&x, &w1, &w2})
      for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = n(rng);
    Tape tape;
    const Value vx = tape.variable(x), vw1 = tape.variable(w1), vw2 = tape.variable(w2);
    Value root;
    composite(tape, vx, vw1, vw2, &root);
    tape.backward(root);
    const auto f = [&](const Eigen::VectorXd& flat) {
      Tape t;
      const Eigen::MatrixXd xm = Eigen::Map<const Eigen::MatrixXd>(flat.data(), 4, 2);
      return composite(t, t.constant(xm), t.constant(w1), t.constant(w2));
    };
    const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
    const Eigen::VectorXd fd = oracle::central_difference(f, x0, 1e-6);
    const Eigen::MatrixXd g = tape.grad(vx);
    const Eigen::VectorXd tape_grad = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
    EXPECT_LT(oracle::relative_error(tape_grad, fd), 1e-7);
  }
}

TEST(GradientTest, Linearity) {
  const auto build = [](Tape&, const Value& x, double a, double b) {
    const Value f = sum(square(sin(x)));
    const Value g = sum(cos(x) * x);
    return a * f + b * g;
  };
  Eigen::MatrixXd x0(3, 1);
  x0 << 0.3, -1.2, 2.0;
  Tape t1, t2, t3;
  const Value x1 = t1.variable(x0), x2 = t2.variable(x0), x3 = t3.variable(x0);
  t1.backward(build(t1, x1, 2.5, -0.75));
  t2.backward(build(t2, x2, 1.0, 0.0));
  t3.backward(build(t3, x3, 0.0, 1.0));
  EXPECT_LT((t1.grad(x1) - (2.5 * t2.grad(x2) - 0.75 * t3.grad(x3))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GradientTest, Deterministic) {
  const auto run = [] {
    Tape t;
    const Value x = t.variable(Eigen::MatrixXd(Eigen::VectorXd::LinSpaced(6, -1, 1)));
    t.backward(sum(softmax(square(x))));
    return t.grad(x);
  };
  const Eigen::MatrixXd a = run(), b = run();
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace graphdist::ad
