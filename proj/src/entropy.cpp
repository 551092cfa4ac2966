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

#include "qgauss/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qgauss/errors.hpp"
#include "qgauss/numerics.hpp"

namespace qgauss {
namespace {

// Underflow floor for p^alpha.
constexpr double kZeroWeight = 1e-300;
constexpr double kShannonWindow = 1e-9;

}  // namespace

ProbVector::ProbVector(std::vector<double> weights) : weights_(std::move(weights)) {
  require(!weights_.empty(), ErrorCode::InvalidArgument, "probability vector is empty");
  for (double w : weights_) {
    require(std::isfinite(w) && w >= 0.0 && w <= 1.0, ErrorCode::InvalidArgument,
            "probability weights must lie in [0,1]");
  }
  const double total = compensated_sum(weights_);
  require(std::abs(total - 1.0) <= kSumTolerance, ErrorCode::InvalidArgument,
          "probability weights must sum to 1");
}

ProbVector ProbVector::from_masses(std::span<const double> masses) {
  const double total = compensated_sum(masses);
  require(total > 0.0, ErrorCode::InvalidArgument, "total mass must be positive");
  std::vector<double> w(masses.begin(), masses.end());
  for (double& x : w) x /= total;
  return ProbVector(std::move(w));
}

EntropyOrder::EntropyOrder(double alpha) : alpha_(alpha) {
  require(!std::isnan(alpha) && alpha >= 0.0, ErrorCode::InvalidArgument,
          "entropy order must be >= 0");
}

double renyi_entropy(const ProbVector& p, EntropyOrder order) {
  std::vector<double> w;
  w.reserve(p.size());
  for (double x : p.weights()) {
    if (x >= kZeroWeight) w.push_back(x);
  }
  std::sort(w.begin(), w.end(), std::greater<>());
  const double pmax = w.front();

  if (order.is_infinite()) return -std::log(pmax);

  const double alpha = order.value();
  if (alpha == 0.0) return std::log(static_cast<double>(w.size()));

  double h = 0.0;
  if (std::abs(alpha - 1.0) < kShannonWindow) {
    NeumaierSum acc;
    for (double x : w) acc += -x * std::log(x);
    h = acc.value();
  } else {
    // sum p^alpha = pmax^alpha * sum (p/pmax)^alpha keeps large alpha finite.
    NeumaierSum acc;
    for (double x : w) acc += std::pow(x / pmax, alpha);
    h = (alpha * std::log(pmax) + std::log(acc.value())) / (1.0 - alpha);
  }
  return std::max(h, 0.0);
}

}  // namespace qgauss
