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

#include <cstddef>
#include <span>

namespace qgauss {

/// Equally spaced tensor grid on [0,1]^dim. Each axis holds the points
/// k/(n-1), k = 0..n-1, so both endpoints are included; a single-point axis
/// sits at 1. Flat indices run with the last axis fastest.
struct GridSpec {
  static constexpr std::size_t kDefaultCap = 16384;

  int dim = 1;
  int points_per_axis = 2;

  std::size_t size() const noexcept;
  double coordinate(int k) const noexcept;
  double spacing() const noexcept;
  void point(std::size_t index, std::span<double> out) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws InvalidArgument for nonpositive sizes and GridTooLarge above `cap`.
void validate_grid(const GridSpec& grid, std::size_t cap = GridSpec::kDefaultCap);

inline GridSpec make_grid(int dim, int points_per_axis, std::size_t cap = GridSpec::kDefaultCap) {
  GridSpec g{dim, points_per_axis};
  validate_grid(g, cap);
  return g;
}

}  // namespace qgauss
