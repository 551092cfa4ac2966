/*
 * Copyright 2026 The qgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "qgauss/errors.hpp"
#include "qgauss/grid.hpp"

namespace qgauss {

struct NormSpec {
  enum class Kind { Sup, Lp };

  Kind kind = Kind::Sup;
  double p = 2.0;

  static NormSpec sup() { return {Kind::Sup, 0.0}; }
  static NormSpec lp(double p) { return {Kind::Lp, p}; }

  std::string to_string() const;
  friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

void validate_norm(const NormSpec& norm);

/// rho(x) = x^r.
class Distortion {
 public:
  explicit Distortion(double r);
  double r() const noexcept { return r_; }

 private:
  double r_;
};

/// x^r with 0^r = 0.
double distortion_value(double x, const Distortion& rho);

/// Evaluates a norm of grid-discretized paths. The sup norm is the max over
/// grid points, so it can only understate the sup of the continuous path.
/// L_p uses tensor trapezoid weights, which sum to one on [0,1]^d.
class NormEvaluator {
 public:
  NormEvaluator(const GridSpec& grid, const NormSpec& norm);

  const GridSpec& grid() const noexcept { return grid_; }
  const NormSpec& norm() const noexcept { return norm_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  template <typename Derived>
  double operator()(const Eigen::MatrixBase<Derived>& path) const {
    check_size(path.size());
    if (norm_.kind == NormSpec::Kind::Sup) return static_cast<double>(path.cwiseAbs().maxCoeff());
    double acc = 0.0;
    const Eigen::Index n = path.size();
    if (norm_.p == 2.0) {
      for (Eigen::Index i = 0; i < n; ++i) acc += weights_(i) * double(path(i)) * double(path(i));
      return std::sqrt(acc);
    }
    if (norm_.p == 1.0) {
      for (Eigen::Index i = 0; i < n; ++i) acc += weights_(i) * std::abs(double(path(i)));
      return acc;
    }
    for (Eigen::Index i = 0; i < n; ++i) acc += weights_(i) * std::pow(std::abs(double(path(i))), norm_.p);
    return std::pow(acc, 1.0 / norm_.p);
  }

  /// Whether ||x - y|| <= bound, stopping as soon as the answer is known.
  template <typename A, typename B>
  bool within(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y, double bound) const {
    check_size(x.size());
    check_size(y.size());
    const Eigen::Index n = x.size();
    if (norm_.kind == NormSpec::Kind::Sup) {
      for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(double(x(i)) - double(y(i))) > bound) return false;
      return true;
    }
    const double budget = std::pow(bound, norm_.p);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += weights_(i) * std::pow(std::abs(double(x(i)) - double(y(i))), norm_.p);
      if (acc > budget) return false;
    }
    return true;
  }

 private:
  void check_size(Eigen::Index n) const {
    require(static_cast<std::size_t>(n) == grid_.size(), ErrorCode::DimensionMismatch,
            "path length " + std::to_string(n) + " does not match grid size " + std::to_string(grid_.size()));
  }

  GridSpec grid_;
  NormSpec norm_;
  Eigen::VectorXd weights_;
};

template <typename Derived>
double path_norm(const Eigen::MatrixBase<Derived>& path, const GridSpec& grid, const NormSpec& norm) {
  return NormEvaluator(grid, norm)(path);
}

}  // namespace qgauss
