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

#include "qgauss/grid.hpp"

#include <string>

#include "qgauss/errors.hpp"

namespace qgauss {

std::size_t GridSpec::size() const noexcept {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(points_per_axis);
  return total;
}

double GridSpec::coordinate(int k) const noexcept {
  if (points_per_axis == 1) return 1.0;
  return static_cast<double>(k) / static_cast<double>(points_per_axis - 1);
}

double GridSpec::spacing() const noexcept {
  return points_per_axis == 1 ? 1.0 : 1.0 / static_cast<double>(points_per_axis - 1);
}

void GridSpec::point(std::size_t index, std::span<double> out) const {
  require(out.size() == static_cast<std::size_t>(dim), ErrorCode::DimensionMismatch, "grid point buffer size");
  const auto n = static_cast<std::size_t>(points_per_axis);
  for (int a = dim - 1; a >= 0; --a) {
    out[static_cast<std::size_t>(a)] = coordinate(static_cast<int>(index % n));
    index /= n;
  }
}

void validate_grid(const GridSpec& grid, std::size_t cap) {
  require(grid.dim >= 1 && grid.points_per_axis >= 1, ErrorCode::InvalidArgument,
          "grid dimension and points per axis must be positive");
  double total = 1.0;
  for (int a = 0; a < grid.dim; ++a) total *= grid.points_per_axis;
  require(total <= static_cast<double>(cap), ErrorCode::GridTooLarge,
          "grid has " + std::to_string(static_cast<long long>(total)) + " points, cap is " + std::to_string(cap));
}

}  // namespace qgauss
