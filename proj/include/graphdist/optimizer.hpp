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

#ifndef GRAPHDIST_OPTIMIZER_HPP
#define GRAPHDIST_OPTIMIZER_HPP

#include <Eigen/Core>

#include <cmath>

#include "graphdist/errors.hpp"

namespace graphdist {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const {
    if (!(lr > 0) || !std::isfinite(lr)) throw ConfigError("adam: lr must be positive");
    if (!(beta1 > 0 && beta1 < 1) || !(beta2 > 0 && beta2 < 1)) throw ConfigError("adam: betas must lie in (0, 1)");
    if (!(eps > 0)) throw ConfigError("adam: eps must be positive");
  }
};

/// Adam with bias-corrected moments.
template <typename Scalar = double>
class Adam {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Adam(Eigen::Index size, const AdamConfig& config) : config_(config), m_(Vector::Zero(size)), v_(Vector::Zero(size)) {
    config_.validate();
  }

  // x -= lr * m_hat / (sqrt(v_hat) + eps), at the given step size.
  template <typename DerivedX, typename DerivedG>
  void step(Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedG>& g, Scalar lr) {
    if (x.size() != m_.size() || g.size() != m_.size()) throw DimensionError("adam: parameter size mismatch");
    ++t_;
    m_ = config_.beta1 * m_ + (1 - config_.beta1) * g;
    v_ = config_.beta2 * v_ + (1 - config_.beta2) * g.cwiseAbs2();
    const Scalar c1 = 1 - std::pow(Scalar(config_.beta1), Scalar(t_));
    const Scalar c2 = 1 - std::pow(Scalar(config_.beta2), Scalar(t_));
    x.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + config_.eps);
  }

  template <typename DerivedX, typename DerivedG>
  void step(Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedG>& g) {
    step(x, g, config_.lr);
  }

  long steps() const noexcept { return t_; }
  const AdamConfig& config() const noexcept { return config_; }

 private:
  AdamConfig config_;
  Vector m_, v_;
  long t_ = 0;
};

}  // namespace graphdist

#endif  // GRAPHDIST_OPTIMIZER_HPP
