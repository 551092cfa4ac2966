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
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "qgauss/grid.hpp"
#include "qgauss/kernels.hpp"

namespace qgauss {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class PayloadKind : std::uint32_t { Covariance = 1, Factor = 2, Paths = 3, Norms = 4 };

/// 32-byte little-endian header:
///   [0,8)   magic "QGAUSSv1"
///   [8,12)  u32 grid dimension
///   [12,16) u32 points per axis
///   [16,20) u32 kernel family tag
///   [20,24) u32 payload kind
///   [24,32) u64 FNV-1a hash of the canonical parameter key
/// followed by u64 rows, u64 cols and rows*cols f64 values in row-major order.
struct BinaryHeader {
  static constexpr std::array<char, 8> kMagic{'Q', 'G', 'A', 'U', 'S', 'S', 'v', '1'};

  std::uint32_t dim = 0;
  std::uint32_t points_per_axis = 0;
  std::uint32_t family = 0;
  PayloadKind kind = PayloadKind::Covariance;
  std::uint64_t parameter_hash = 0;

  friend bool operator==(const BinaryHeader&, const BinaryHeader&) = default;
};

void write_binary(const std::filesystem::path& file, const BinaryHeader& header, const RowMatrixXd& data);

/// Throws CacheFormat on a bad magic or truncated payload.
std::pair<BinaryHeader, RowMatrixXd> read_binary(const std::filesystem::path& file);

/// Content-addressed directory of binary artifacts. Keys are canonical
/// parameter strings; a header mismatch is treated as a miss.
class ArtifactCache {
 public:
  explicit ArtifactCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// $QGAUSS_CACHE if set, otherwise `fallback`.
  static std::filesystem::path default_dir(const std::filesystem::path& fallback);

  std::optional<RowMatrixXd> load(const BinaryHeader& header) const;
  void store(const BinaryHeader& header, const RowMatrixXd& data) const;
  std::filesystem::path file_for(const BinaryHeader& header) const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
};

BinaryHeader make_header(const CovarianceKernel& kernel, const GridSpec& grid, PayloadKind kind,
                         const std::string& key);

}  // namespace qgauss
