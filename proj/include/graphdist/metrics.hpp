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

#ifndef GRAPHDIST_METRICS_HPP
#define GRAPHDIST_METRICS_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "graphdist/errors.hpp"

namespace graphdist {

template <typename Scalar>
Scalar mean_absolute_error(std::span<const Scalar> predicted, std::span<const Scalar> truth) {
  if (predicted.size() != truth.size()) throw DimensionError("mean_absolute_error: size mismatch");
  if (predicted.empty()) throw PreconditionError("mean_absolute_error: empty input");
  Scalar total(0);
  for (std::size_t i = 0; i < predicted.size(); ++i) total += std::abs(predicted[i] - truth[i]);
  return total / static_cast<Scalar>(predicted.size());
}

/// Area under the ROC curve by the Mann-Whitney rank statistic. Higher scores
/// should indicate positives; tied scores receive their average rank.
template <typename Scalar>
double roc_auc(std::span<const Scalar> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw DimensionError("roc_auc: size mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1 .. j
    for (std::size_t t = i; t < j; ++t)
      if (positive[order[t]]) {
        positive_rank_sum += rank;
        ++positives;
      }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw PreconditionError("AUC is undefined for a single-class set");
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1) / 2) / (p * static_cast<double>(negatives));
}

// 1 - cosine similarity, in [0, 2]. Identical vectors score 0; otherwise a zero
// vector has no direction and scores 1.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.size() != b.size()) throw DimensionError("cosine_distance: size mismatch");
  if (a == b) return Scalar(0);
  const Scalar na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return Scalar(1);
  const Scalar c = a.dot(b) / (na * nb);
  return Scalar(1) - std::clamp(c, Scalar(-1), Scalar(1));
}

}  // namespace graphdist

#endif  // GRAPHDIST_METRICS_HPP
