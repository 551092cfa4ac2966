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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace qgauss {

/// Neumaier-compensated accumulator.
class NeumaierSum {
 public:
  NeumaierSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  NeumaierSum acc;
  for (double x : xs) acc += x;
  return acc.value();
}

/// Weighted pool-adjacent-violators: the nondecreasing sequence closest to
/// `y` in weighted least squares.
std::vector<double> isotonic_nondecreasing(std::span<const double> y, std::span<const double> w);

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson limited
/// tangents; monotone data gives a monotone interpolant that passes through
/// every knot.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }
  std::span<const double> knots_x() const { return x_; }
  std::span<const double> knots_y() const { return y_; }

 private:
  std::vector<double> x_, y_, m_;
};

/// Kendall tau-b between two equally long sequences.
double kendall_tau(std::span<const double> x, std::span<const double> y);

/// Standard normal density and distribution function.
inline double normal_pdf(double x) { return 0.3989422804014326779 * std::exp(-0.5 * x * x); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace qgauss
