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

#include <limits>
#include <span>
#include <vector>

namespace qgauss {

/// Finite probability vector. Construction rejects negative weights and
/// weights that do not sum to one within 1e-12.
class ProbVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ProbVector(std::vector<double> weights);

  /// Normalizes nonnegative masses (e.g. cell counts) before validating.
  static ProbVector from_masses(std::span<const double> masses);

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }

 private:
  std::vector<double> weights_;
};

/// Entropy index in [0, inf]; infinity is a distinguished value.
class EntropyOrder {
 public:
  explicit EntropyOrder(double alpha);

  static EntropyOrder infinity() { return EntropyOrder(std::numeric_limits<double>::infinity()); }

  double value() const noexcept { return alpha_; }
  bool is_infinite() const noexcept { return alpha_ == std::numeric_limits<double>::infinity(); }

 private:
  double alpha_;
};

/// Renyi entropy in nats. Conventions: 0 log 0 = 0 and 0^x = 0, so the
/// alpha = 0 branch is the log of the support size.
double renyi_entropy(const ProbVector& p, EntropyOrder alpha);

}  // namespace qgauss
