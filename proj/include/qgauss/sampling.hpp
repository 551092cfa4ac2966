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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "qgauss/cache.hpp"
#include "qgauss/covariance.hpp"
#include "qgauss/grid.hpp"
#include "qgauss/kernels.hpp"
#include "qgauss/path_norms.hpp"

namespace qgauss {

struct SamplingOptions {
  unsigned threads = 1;
  /// Directory for cached factors and norm vectors; disabled when empty.
  std::optional<std::filesystem::path> cache_dir;
};

/// Rows are samples, columns are grid points in flat index order.
struct PathEnsemble {
  GridSpec grid;
  CovarianceKernel kernel;
  std::uint64_t seed = 0;
  RowMatrixXd paths;

  Eigen::Index n_samples() const noexcept { return paths.rows(); }
};

/// Rows per GEMM block. Fixed so that results never depend on scheduling.
inline constexpr Eigen::Index kSampleChunk = 1024;

/// Symmetric square root of the repaired covariance, cached when enabled.
Eigen::MatrixXd covariance_root(const CovarianceKernel& kernel, const GridSpec& grid,
                                const SamplingOptions& options = {});

/// Fills `z` with standard normals for samples [first, first + z.rows()).
void standard_normals(std::uint64_t seed, std::uint64_t first, RowMatrixXd& z);

PathEnsemble sample_paths(const CovarianceKernel& kernel, const GridSpec& grid, std::int64_t n_samples,
                          std::uint64_t seed, const SamplingOptions& options = {});

/// Norms of the same paths `sample_paths` would return, without holding
/// the full ensemble in memory.
std::vector<double> sample_norms(const CovarianceKernel& kernel, const GridSpec& grid, const NormSpec& norm,
                                 std::int64_t n_samples, std::uint64_t seed, const SamplingOptions& options = {});

}  // namespace qgauss
