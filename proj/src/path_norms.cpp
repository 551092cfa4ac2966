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

#include "qgauss/path_norms.hpp"

#include <cstdio>

namespace qgauss {

std::string NormSpec::to_string() const {
  if (kind == Kind::Sup) return "sup";
  char buf[48];
  std::snprintf(buf, sizeof buf, "lp(%.17g)", p);
  return buf;
}

void validate_norm(const NormSpec& norm) {
  if (norm.kind == NormSpec::Kind::Lp)
    require(std::isfinite(norm.p) && norm.p >= 1.0, ErrorCode::InvalidArgument, "L_p norm needs p >= 1");
}

Distortion::Distortion(double r) : r_(r) {
  require(std::isfinite(r) && r > 0.0, ErrorCode::InvalidArgument, "distortion exponent r must be > 0");
}

double distortion_value(double x, const Distortion& rho) {
  require(x >= 0.0, ErrorCode::InvalidArgument, "distortion argument must be >= 0");
  if (x == 0.0) return 0.0;
  if (rho.r() == 1.0) return x;
  if (rho.r() == 2.0) return x * x;
  return std::pow(x, rho.r());
}

NormEvaluator::NormEvaluator(const GridSpec& grid, const NormSpec& norm) : grid_(grid), norm_(norm) {
  validate_grid(grid_, std::numeric_limits<std::size_t>::max());
  validate_norm(norm_);
  if (norm_.kind == NormSpec::Kind::Sup) return;
  const int n = grid_.points_per_axis;
  Eigen::VectorXd axis(n);
  if (n == 1) {
    axis(0) = 1.0;
  } else {
    axis.setConstant(grid_.spacing());
    axis(0) *= 0.5;
    axis(n - 1) *= 0.5;
  }
  const auto total = static_cast<Eigen::Index>(grid_.size());
  weights_.resize(total);
  for (Eigen::Index i = 0; i < total; ++i) {
    double w = 1.0;
    auto idx = static_cast<std::size_t>(i);
    for (int a = 0; a < grid_.dim; ++a) {
      w *= axis(static_cast<Eigen::Index>(idx % static_cast<std::size_t>(n)));
      idx /= static_cast<std::size_t>(n);
    }
    weights_(i) = w;
  }
}

}  // namespace qgauss
