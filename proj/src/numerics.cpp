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

#include "qgauss/numerics.hpp"

#include <algorithm>

#include "qgauss/errors.hpp"

namespace qgauss {

std::vector<double> isotonic_nondecreasing(std::span<const double> y, std::span<const double> w) {
  require(y.size() == w.size(), ErrorCode::DimensionMismatch, "isotonic: weights/values size mismatch");
  struct Block {
    double mean, weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    require(w[i] > 0.0, ErrorCode::InvalidArgument, "isotonic: weights must be positive");
    blocks.push_back({y[i], w[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double wt = prev.weight + top.weight;
      prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / wt;
      prev.weight = wt;
      prev.count += top.count;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.mean);
  return out;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  require(!x_.empty() && x_.size() == y_.size(), ErrorCode::DimensionMismatch,
          "interpolant needs matching nonempty knots");
  const std::size_t n = x_.size();
  for (std::size_t i = 1; i < n; ++i)
    require(x_[i] > x_[i - 1], ErrorCode::InvalidArgument, "interpolant abscissae must increase strictly");
  m_.assign(n, 0.0);
  if (n == 1) return;

  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    m_[0] = m_[1] = d[0];
    return;
  }
  // Three-point (parabolic) tangents are third-order accurate on smooth data.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (sign(d[i - 1]) != sign(d[i]) || d[i] == 0.0 || d[i - 1] == 0.0) {
      m_[i] = 0.0;
    } else {
      m_[i] = (h[i - 1] * d[i] + h[i] * d[i - 1]) / (h[i - 1] + h[i]);
    }
  }
  auto end_tangent = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign(m) != sign(d0)) m = 0.0;
    else if (sign(d0) != sign(d1) && std::abs(m) > std::abs(3.0 * d0)) m = 3.0 * d0;
    return m;
  };
  m_[0] = end_tangent(h[0], h[1], d[0], d[1]);
  m_[n - 1] = end_tangent(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);

  // Fritsch-Carlson limiter.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m_[i] = m_[i + 1] = 0.0;
      continue;
    }
    const double a = m_[i] / d[i];
    const double b = m_[i + 1] / d[i];
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      m_[i] = tau * a * d[i];
      m_[i + 1] = tau * b * d[i];
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t n = x_.size();
  if (n == 1) return y_[0];
  std::size_t k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  if (k > 0 && x_[k - 1] == x) return y_[k - 1];
  k = std::clamp<std::size_t>(k, 1, n - 1) - 1;
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[k] + h10 * h * m_[k] + h01 * y_[k + 1] + h11 * h * m_[k + 1];
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::DimensionMismatch, "kendall_tau: size mismatch");
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int sx = sign(x[j] - x[i]);
      const int sy = sign(y[j] - y[i]);
      if (sx == 0 && sy == 0) continue;
      if (sx == 0) ++ties_x;
      else if (sy == 0) ++ties_y;
      else if (sx == sy) ++concordant;
      else ++discordant;
    }
  }
  const double n0 = static_cast<double>(concordant + discordant);
  const double denom = std::sqrt((n0 + ties_x) * (n0 + ties_y));
  if (denom == 0.0) return 0.0;
  return static_cast<double>(concordant - discordant) / denom;
}

}  // namespace qgauss
