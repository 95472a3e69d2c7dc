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

#include "graphdist/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace graphdist::ad {

namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

Tape& same_tape(const Value& a, const Value& b) {
  if (!a.valid() || !b.valid()) throw TapeError("operation on an unbound value");
  if (a.tape() != b.tape()) throw TapeError("values belong to different tapes");
  return *a.tape();
}

Tape& tape_of(const Value& a) {
  if (!a.valid()) throw TapeError("operation on an unbound value");
  return *a.tape();
}

Tape& tape_of(std::span<const Value> parts) {
  if (parts.empty()) throw DimensionError("operation needs at least one input");
  Tape& t = tape_of(parts[0]);
  for (const Value& p : parts) same_tape(parts[0], p);
  return t;
}

void require_same_shape(std::string_view op, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
}

bool any_grad(std::span<const Value> parts) {
  return std::any_of(parts.begin(), parts.end(), [](const Value& v) { return v.tape()->requires_grad(v); });
}

// Unary elementwise op with derivative f'(x) evaluated from the input.
template <typename F, typename DF>
Value unary(std::string_view op, const Value& a, F f, DF df) {
  Tape& t = tape_of(a);
  const std::size_t ia = a.id();
  Matrix out = a.value().unaryExpr(f);
  return t.record(op, std::move(out), t.requires_grad(a), [ia, df](Tape& tp, const Matrix& g) {
    tp.accumulate(ia, g.cwiseProduct(tp.value(ia).unaryExpr(df)));
  });
}

}  // namespace

const Matrix& Value::value() const {
  if (!tape_) throw TapeError("value() on an unbound value");
  return tape_->value(id_);
}

double Value::scalar() const {
  const Matrix& m = value();
  if (m.size() != 1) throw DimensionError("scalar() on a " + shape(m) + " value");
  return m(0, 0);
}

Value Tape::record(std::string_view op, Matrix v, bool requires_grad, Backward backward) {
  if (!v.allFinite()) throw NumericError(std::string(op) + " produced a non-finite value");
  Node n;
  n.value = std::move(v);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Value(this, nodes_.size() - 1);
}

Value Tape::variable(Matrix v) { return record("variable", std::move(v), true, nullptr); }
Value Tape::variable(double v) { return variable(Matrix::Constant(1, 1, v)); }
Value Tape::constant(Matrix v) { return record("constant", std::move(v), false, nullptr); }
Value Tape::constant(double v) { return constant(Matrix::Constant(1, 1, v)); }

void Tape::backward(const Value& root) {
  if (root.tape() != this) throw TapeError("backward root belongs to another tape");
  if (backward_done_) throw TapeError("backward already ran on this tape; call reset_gradients() first");
  if (root.value().size() != 1) throw DimensionError("backward root must be scalar, got " + shape(root.value()));
  backward_done_ = true;
  if (!nodes_[root.id()].requires_grad) return;
  nodes_[root.id()].grad = Matrix::Ones(1, 1);
  for (std::size_t id = root.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0 || !n.backward) continue;
    n.backward(*this, n.grad);
  }
}

Matrix Tape::grad(const Value& v) const {
  if (v.tape() != this) throw TapeError("grad() of a value from another tape");
  const Node& n = nodes_[v.id()];
  if (n.grad.size() == 0) return Matrix::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::reset_gradients() {
  for (Node& n : nodes_) n.grad.resize(0, 0);
  backward_done_ = false;
}

Value add(const Value& a, const Value& b) {
  Tape& t = same_tape(a, b);
  require_same_shape("add", a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("add", a.value() + b.value(), t.requires_grad(a) || t.requires_grad(b),
                  [ia, ib](Tape& tp, const Matrix& g) {
                    tp.accumulate(ia, g);
                    tp.accumulate(ib, g);
                  });
}

Value sub(const Value& a, const Value& b) {
  Tape& t = same_tape(a, b);
  require_same_shape("sub", a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return t.record("sub", a.value() - b.value(), t.requires_grad(a) || t.requires_grad(b),
                  [ia, ib](Tape& tp, const Matrix& g) {
                    tp.accumulate(ia, g);
                    tp.accumulate(ib, -g);
                  });
}

Value mul(const Value& a, const Value& b) {
  Tape& t = same_tape(a, b);
  const Matrix& va = a.value();
  const Matrix& vb = b.value();
  const std::size_t ia = a.id(), ib = b.id();
  const bool rg = t.requires_grad(a) || t.requires_grad(b);
  if (va.size() == 1 && vb.size() != 1) {
    return t.record("mul", va(0, 0) * vb, rg, [ia, ib](Tape& tp, const Matrix& g) {
      tp.accumulate(ia, Matrix::Constant(1, 1, g.cwiseProduct(tp.value(ib)).sum()));
      tp.accumulate(ib, tp.value(ia)(0, 0) * g);
    });
  }
  if (vb.size() == 1 && va.size() != 1) {
    return t.record("mul", vb(0, 0) * va, rg, [ia, ib](Tape& tp, const Matrix& g) {
      tp.accumulate(ia, tp.value(ib)(0, 0) * g);
      tp.accumulate(ib, Matrix::Constant(1, 1, g.cwiseProduct(tp.value(ia)).sum()));
    });
  }
  require_same_shape("mul", va, vb);
  return t.record("mul", va.cwiseProduct(vb), rg, [ia, ib](Tape& tp, const Matrix& g) {
    tp.accumulate(ia, g.cwiseProduct(tp.value(ib)));
    tp.accumulate(ib, g.cwiseProduct(tp.value(ia)));
  });
}

Value neg(const Value& a) { return scale(a, -1.0); }

Value scale(const Value& a, double s) {
  Tape& t = tape_of(a);
  const std::size_t ia = a.id();
  return t.record("scale", s * a.value(), t.requires_grad(a),
                  [ia, s](Tape& tp, const Matrix& g) { tp.accumulate(ia, s * g); });
}

Value shift(const Value& a, double s) {
  Tape& t = tape_of(a);
  const std::size_t ia = a.id();
  return t.record("shift", a.value().array() + s, t.requires_grad(a),
                  [ia](Tape& tp, const Matrix& g) { tp.accumulate(ia, g); });
}

Value square(const Value& a) {
  return unary("square", a, [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
}

Value reciprocal(const Value& a) {
  return unary("reciprocal", a, [](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); });
}

Value sin(const Value& a) {
  return unary("sin", a, [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); });
}

Value cos(const Value& a) {
  return unary("cos", a, [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); });
}

Value leaky_relu(const Value& a, double slope) {
  return unary(
      "leaky_relu", a, [slope](double x) { return x > 0 ? x : slope * x; },
      [slope](double x) { return x > 0 ? 1.0 : slope; });
}

Value matmul(const Value& a, const Value& b) {
  Tape& t = same_tape(a, b);
  if (a.cols() != b.rows())
    throw DimensionError("matmul: shape mismatch " + shape(a.value()) + " * " + shape(b.value()));
  const std::size_t ia = a.id(), ib = b.id();
  Matrix out = a.value() * b.value();
  return t.record("matmul", std::move(out), t.requires_grad(a) || t.requires_grad(b),
                  [ia, ib](Tape& tp, const Matrix& g) {
                    if (tp.requires_grad(ia)) tp.accumulate(ia, g * tp.value(ib).transpose());
                    if (tp.requires_grad(ib)) tp.accumulate(ib, tp.value(ia).transpose() * g);
                  });
}

Value matvec(const Value& a, const Value& v) {
  if (v.cols() != 1) throw DimensionError("matvec: vector operand must be a column, got " + shape(v.value()));
  return matmul(a, v);
}

Value dot(const Value& a, const Value& b) {
  Tape& t = same_tape(a, b);
  require_same_shape("dot", a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  const double d = a.value().cwiseProduct(b.value()).sum();
  return t.record("dot", Matrix::Constant(1, 1, d), t.requires_grad(a) || t.requires_grad(b),
                  [ia, ib](Tape& tp, const Matrix& g) {
                    tp.accumulate(ia, g(0, 0) * tp.value(ib));
                    tp.accumulate(ib, g(0, 0) * tp.value(ia));
                  });
}

Value affine(const Value& x, const Value& w, const Value& bias) {
  Tape& t = same_tape(x, w);
  same_tape(x, bias);
  if (x.cols() != w.rows())
    throw DimensionError("affine: shape mismatch " + shape(x.value()) + " * " + shape(w.value()));
  if (bias.rows() != 1 || bias.cols() != w.cols())
    throw DimensionError("affine: bias must be 1x" + std::to_string(w.cols()) + ", got " + shape(bias.value()));
  const std::size_t ix = x.id(), iw = w.id(), ib = bias.id();
  Matrix out = x.value() * w.value();
  out.rowwise() += bias.value().row(0);
  const bool rg = t.requires_grad(x) || t.requires_grad(w) || t.requires_grad(bias);
  return t.record("affine", std::move(out), rg, [ix, iw, ib](Tape& tp, const Matrix& g) {
    if (tp.requires_grad(ix)) tp.accumulate(ix, g * tp.value(iw).transpose());
    if (tp.requires_grad(iw)) tp.accumulate(iw, tp.value(ix).transpose() * g);
    if (tp.requires_grad(ib)) tp.accumulate(ib, g.colwise().sum());
  });
}

Value concat_cols(std::span<const Value> parts) {
  Tape& t = tape_of(parts);
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  for (const Value& p : parts) {
    if (p.rows() != rows) throw DimensionError("concat_cols: row count mismatch");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<std::size_t> ids;
  std::vector<Eigen::Index> widths;
  Eigen::Index c = 0;
  for (const Value& p : parts) {
    out.middleCols(c, p.cols()) = p.value();
    c += p.cols();
    ids.push_back(p.id());
    widths.push_back(p.cols());
  }
  return t.record("concat_cols", std::move(out), any_grad(parts), [ids, widths](Tape& tp, const Matrix& g) {
    Eigen::Index c = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      tp.accumulate(ids[k], g.middleCols(c, widths[k]));
      c += widths[k];
    }
  });
}

Value concat_rows(std::span<const Value> parts) {
  Tape& t = tape_of(parts);
  const Eigen::Index cols = parts[0].cols();
  Eigen::Index rows = 0;
  for (const Value& p : parts) {
    if (p.cols() != cols) throw DimensionError("concat_rows: column count mismatch");
    rows += p.rows();
  }
  Matrix out(rows, cols);
  std::vector<std::size_t> ids;
  std::vector<Eigen::Index> heights;
  Eigen::Index r = 0;
  for (const Value& p : parts) {
    out.middleRows(r, p.rows()) = p.value();
    r += p.rows();
    ids.push_back(p.id());
    heights.push_back(p.rows());
  }
  return t.record("concat_rows", std::move(out), any_grad(parts), [ids, heights](Tape& tp, const Matrix& g) {
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      tp.accumulate(ids[k], g.middleRows(r, heights[k]));
      r += heights[k];
    }
  });
}

Value slice(const Value& a, Eigen::Index row, Eigen::Index col, Eigen::Index rows, Eigen::Index cols) {
  Tape& t = tape_of(a);
  if (row < 0 || col < 0 || rows < 0 || cols < 0 || row + rows > a.rows() || col + cols > a.cols())
    throw DimensionError("slice: block out of range for " + shape(a.value()));
  const std::size_t ia = a.id();
  const Eigen::Index ar = a.rows(), ac = a.cols();
  return t.record("slice", a.value().block(row, col, rows, cols), t.requires_grad(a),
                  [=](Tape& tp, const Matrix& g) {
                    Matrix full = Matrix::Zero(ar, ac);
                    full.block(row, col, rows, cols) = g;
                    tp.accumulate(ia, full);
                  });
}

Value assemble(std::span<const Value> scalars, Eigen::Index rows, Eigen::Index cols) {
  Tape& t = tape_of(scalars);
  if (static_cast<Eigen::Index>(scalars.size()) != rows * cols)
    throw DimensionError("assemble: expected " + std::to_string(rows * cols) + " scalars");
  Matrix out(rows, cols);
  std::vector<std::size_t> ids(scalars.size());
  for (std::size_t k = 0; k < scalars.size(); ++k) {
    if (scalars[k].value().size() != 1) throw DimensionError("assemble: inputs must be 1x1");
    out(static_cast<Eigen::Index>(k) / cols, static_cast<Eigen::Index>(k) % cols) = scalars[k].value()(0, 0);
    ids[k] = scalars[k].id();
  }
  return t.record("assemble", std::move(out), any_grad(scalars), [ids, cols](Tape& tp, const Matrix& g) {
    for (std::size_t k = 0; k < ids.size(); ++k)
      tp.accumulate(ids[k], g.block(static_cast<Eigen::Index>(k) / cols, static_cast<Eigen::Index>(k) % cols, 1, 1));
  });
}

Value gather_rows(const Value& a, std::span<const int> index) {
  Tape& t = tape_of(a);
  const Matrix& va = a.value();
  Matrix out(static_cast<Eigen::Index>(index.size()), va.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= va.rows()) throw IndexError("gather_rows: row index out of range");
    out.row(static_cast<Eigen::Index>(k)) = va.row(index[k]);
  }
  const std::size_t ia = a.id();
  const Eigen::Index ar = va.rows();
  auto idx = std::make_shared<std::vector<int>>(index.begin(), index.end());
  return t.record("gather_rows", std::move(out), t.requires_grad(a), [ia, ar, idx](Tape& tp, const Matrix& g) {
    Matrix full = Matrix::Zero(ar, g.cols());
    for (std::size_t k = 0; k < idx->size(); ++k) full.row((*idx)[k]) += g.row(static_cast<Eigen::Index>(k));
    tp.accumulate(ia, full);
  });
}

Value scatter_add_rows(const Value& a, std::span<const int> index, Eigen::Index rows) {
  Tape& t = tape_of(a);
  const Matrix& va = a.value();
  if (static_cast<Eigen::Index>(index.size()) != va.rows())
    throw DimensionError("scatter_add_rows: index length must equal row count");
  Matrix out = Matrix::Zero(rows, va.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= rows) throw IndexError("scatter_add_rows: target row out of range");
    out.row(index[k]) += va.row(static_cast<Eigen::Index>(k));
  }
  const std::size_t ia = a.id();
  auto idx = std::make_shared<std::vector<int>>(index.begin(), index.end());
  return t.record("scatter_add_rows", std::move(out), t.requires_grad(a), [ia, idx](Tape& tp, const Matrix& g) {
    Matrix part(static_cast<Eigen::Index>(idx->size()), g.cols());
    for (std::size_t k = 0; k < idx->size(); ++k) part.row(static_cast<Eigen::Index>(k)) = g.row((*idx)[k]);
    tp.accumulate(ia, part);
  });
}

Value scale_rows(const Value& a, const Value& w) {
  Tape& t = same_tape(a, w);
  if (w.cols() != 1 || w.rows() != a.rows())
    throw DimensionError("scale_rows: weights must be " + std::to_string(a.rows()) + "x1, got " + shape(w.value()));
  const std::size_t ia = a.id(), iw = w.id();
  Matrix out = w.value().col(0).asDiagonal() * a.value();
  return t.record("scale_rows", std::move(out), t.requires_grad(a) || t.requires_grad(w),
                  [ia, iw](Tape& tp, const Matrix& g) {
                    if (tp.requires_grad(ia)) tp.accumulate(ia, tp.value(iw).col(0).asDiagonal() * g);
                    if (tp.requires_grad(iw)) tp.accumulate(iw, g.cwiseProduct(tp.value(ia)).rowwise().sum());
                  });
}

Value sum(const Value& a) {
  Tape& t = tape_of(a);
  const std::size_t ia = a.id();
  const Eigen::Index r = a.rows(), c = a.cols();
  return t.record("sum", Matrix::Constant(1, 1, a.value().sum()), t.requires_grad(a),
                  [ia, r, c](Tape& tp, const Matrix& g) { tp.accumulate(ia, Matrix::Constant(r, c, g(0, 0))); });
}

Value mean(const Value& a) {
  if (a.value().size() == 0) throw DimensionError("mean of an empty value");
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Value elementwise_max(std::span<const Value> parts) {
  Tape& t = tape_of(parts);
  const Matrix& first = parts[0].value();
  for (const Value& p : parts) require_same_shape("elementwise_max", first, p.value());
  Matrix out = first;
  Eigen::MatrixXi which = Eigen::MatrixXi::Zero(first.rows(), first.cols());
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const Matrix& v = parts[k].value();
    for (Eigen::Index j = 0; j < v.cols(); ++j)
      for (Eigen::Index i = 0; i < v.rows(); ++i)
        if (v(i, j) > out(i, j)) {
          out(i, j) = v(i, j);
          which(i, j) = static_cast<int>(k);
        }
  }
  std::vector<std::size_t> ids;
  for (const Value& p : parts) ids.push_back(p.id());
  return t.record("elementwise_max", std::move(out), any_grad(parts), [ids, which](Tape& tp, const Matrix& g) {
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!tp.requires_grad(ids[k])) continue;
      Matrix part = (which.array() == static_cast<int>(k)).cast<double>().matrix().cwiseProduct(g);
      tp.accumulate(ids[k], part);
    }
  });
}

namespace {

void softmax_range(const Matrix& in, Matrix& out, const std::vector<int>& rows) {
  double m = -std::numeric_limits<double>::infinity();
  for (int r : rows) m = std::max(m, in(r, 0));
  double z = 0;
  for (int r : rows) z += std::exp(in(r, 0) - m);
  for (int r : rows) out(r, 0) = std::exp(in(r, 0) - m) / z;
}

void softmax_backward_range(const Matrix& s, const Matrix& g, Matrix& gin, const std::vector<int>& rows) {
  double gs = 0;
  for (int r : rows) gs += g(r, 0) * s(r, 0);
  for (int r : rows) gin(r, 0) = s(r, 0) * (g(r, 0) - gs);
}

}  // namespace

Value softmax(const Value& a) {
  if (a.cols() != 1) throw DimensionError("softmax: input must be a column vector, got " + shape(a.value()));
  std::vector<int> seg(static_cast<std::size_t>(a.rows()), 0);
  return segment_softmax(a, seg, 1);
}

Value segment_softmax(const Value& a, std::span<const int> segment, int segments) {
  Tape& t = tape_of(a);
  const Matrix& va = a.value();
  if (va.cols() != 1) throw DimensionError("segment_softmax: input must be a column vector");
  if (static_cast<Eigen::Index>(segment.size()) != va.rows())
    throw DimensionError("segment_softmax: segment ids must match input length");
  auto groups = std::make_shared<std::vector<std::vector<int>>>(static_cast<std::size_t>(segments));
  for (std::size_t i = 0; i < segment.size(); ++i) {
    if (segment[i] < 0 || segment[i] >= segments) throw IndexError("segment_softmax: segment id out of range");
    (*groups)[static_cast<std::size_t>(segment[i])].push_back(static_cast<int>(i));
  }
  auto out = std::make_shared<Matrix>(va.rows(), 1);
  for (const auto& rows : *groups)
    if (!rows.empty()) softmax_range(va, *out, rows);
  const std::size_t ia = a.id();
  Matrix result = *out;
  return t.record("segment_softmax", std::move(result), t.requires_grad(a), [ia, out, groups](Tape& tp, const Matrix& g) {
    Matrix gin(g.rows(), 1);
    for (const auto& rows : *groups)
      if (!rows.empty()) softmax_backward_range(*out, g, gin, rows);
    tp.accumulate(ia, gin);
  });
}

Value operator+(const Value& a, const Value& b) { return add(a, b); }
Value operator-(const Value& a, const Value& b) { return sub(a, b); }
Value operator*(const Value& a, const Value& b) { return mul(a, b); }
Value operator-(const Value& a) { return neg(a); }
Value operator+(const Value& a, double b) { return shift(a, b); }
Value operator+(double a, const Value& b) { return shift(b, a); }
Value operator-(const Value& a, double b) { return shift(a, -b); }
Value operator-(double a, const Value& b) { return shift(neg(b), a); }
Value operator*(const Value& a, double b) { return scale(a, b); }
Value operator*(double a, const Value& b) { return scale(b, a); }

Value constant_like(double v, const Value& like) { return tape_of(like).constant(v); }

}  // namespace graphdist::ad
