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

#ifndef GRAPHDIST_AUTODIFF_HPP
#define GRAPHDIST_AUTODIFF_HPP

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "graphdist/errors.hpp"

/// Reverse-mode differentiation over dense double matrices.
///
/// A Tape records every operation in creation order; Values are lightweight
/// handles into a tape. Scalars are 1x1 matrices. Operations check shapes and
/// reject inputs from different tapes. backward() may run once per tape
/// unless reset_gradients() is called in between.
namespace graphdist::ad {

using Matrix = Eigen::MatrixXd;

class Tape;

class Value {
 public:
  Value() = default;

  const Matrix& value() const;
  double scalar() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  Tape* tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }

 private:
  friend class Tape;
  Value(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  using Backward = std::function<void(Tape&, const Matrix& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Value variable(Matrix v);
  Value variable(double v);
  Value constant(Matrix v);
  Value constant(double v);

  // Appends an operation record. `requires_grad` should be true iff any input
  // requires a gradient; `backward` is dropped otherwise.
  Value record(std::string_view op, Matrix v, bool requires_grad, Backward backward);

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  bool requires_grad(const Value& v) const { return nodes_[v.id()].requires_grad; }

  template <typename Derived>
  void accumulate(std::size_t id, const Eigen::MatrixBase<Derived>& g) {
    Node& n = nodes_[id];
    if (!n.requires_grad) return;
    if (n.grad.size() == 0)
      n.grad = g;
    else
      n.grad += g;
  }

  // Propagates d(root)/d(node) to every antecedent. Root must be 1x1.
  void backward(const Value& root);

  // Gradient of the last backward root w.r.t. v; zeros when v was not reached.
  Matrix grad(const Value& v) const;

  void reset_gradients();
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Backward backward;
    bool requires_grad = false;
  };

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

// Elementwise arithmetic. mul() also accepts a 1x1 operand on either side.
Value add(const Value& a, const Value& b);
Value sub(const Value& a, const Value& b);
Value mul(const Value& a, const Value& b);
Value neg(const Value& a);
Value scale(const Value& a, double s);
Value shift(const Value& a, double s);
Value square(const Value& a);
Value reciprocal(const Value& a);
Value sin(const Value& a);
Value cos(const Value& a);
Value leaky_relu(const Value& a, double slope);

// Linear algebra.
Value matmul(const Value& a, const Value& b);
Value matvec(const Value& a, const Value& v);
Value dot(const Value& a, const Value& b);
// x * w + bias, with bias a 1 x cols(w) row added to every row.
Value affine(const Value& x, const Value& w, const Value& bias);

// Structure.
Value concat_cols(std::span<const Value> parts);
Value concat_rows(std::span<const Value> parts);
Value slice(const Value& a, Eigen::Index row, Eigen::Index col, Eigen::Index rows, Eigen::Index cols);
// Matrix of shape rows x cols whose entries (row-major) are the given 1x1 values.
Value assemble(std::span<const Value> scalars, Eigen::Index rows, Eigen::Index cols);
Value gather_rows(const Value& a, std::span<const int> index);
// out.row(index[t]) += a.row(t); out has `rows` rows. Rows are summed in t order.
Value scatter_add_rows(const Value& a, std::span<const int> index, Eigen::Index rows);
// Row i of a scaled by w(i); w is a column vector.
Value scale_rows(const Value& a, const Value& w);

// Reductions.
Value sum(const Value& a);
Value mean(const Value& a);
// Elementwise maximum across equally shaped inputs; ties go to the first input.
Value elementwise_max(std::span<const Value> parts);
// Softmax over a column vector.
Value softmax(const Value& a);
// Softmax of a column vector taken independently within each segment.
Value segment_softmax(const Value& a, std::span<const int> segment, int segments);

Value operator+(const Value& a, const Value& b);
Value operator-(const Value& a, const Value& b);
Value operator*(const Value& a, const Value& b);
Value operator-(const Value& a);
Value operator+(const Value& a, double b);
Value operator+(double a, const Value& b);
Value operator-(const Value& a, double b);
Value operator-(double a, const Value& b);
Value operator*(const Value& a, double b);
Value operator*(double a, const Value& b);

// Lifts a plain constant onto the tape of `like`; lets scalar-generic code
// (see kinematics.hpp) run on doubles and on tape values alike.
Value constant_like(double v, const Value& like);

}  // namespace graphdist::ad

#endif  // GRAPHDIST_AUTODIFF_HPP
