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

#include "qgauss/sampling.hpp"

#include <string>

#include "qgauss/errors.hpp"
#include "qgauss/parallel.hpp"
#include "qgauss/rng.hpp"

namespace qgauss {
namespace {

std::string grid_key(const GridSpec& grid) {
  return "grid(" + std::to_string(grid.dim) + "," + std::to_string(grid.points_per_axis) + ")";
}

template <typename Body>
void for_each_chunk(std::int64_t n_samples, unsigned threads, Body&& body) {
  const auto chunks = static_cast<std::size_t>((n_samples + kSampleChunk - 1) / kSampleChunk);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const Eigen::Index first = static_cast<Eigen::Index>(c) * kSampleChunk;
    const Eigen::Index rows = std::min<Eigen::Index>(kSampleChunk, n_samples - first);
    body(first, rows);
  });
}

}  // namespace

Eigen::MatrixXd covariance_root(const CovarianceKernel& kernel, const GridSpec& grid,
                                const SamplingOptions& options) {
  validate_grid(grid);
  validate_kernel(kernel, grid);
  std::optional<ArtifactCache> cache;
  BinaryHeader header;
  if (options.cache_dir && !options.cache_dir->empty()) {
    cache.emplace(*options.cache_dir);
    header = make_header(kernel, grid, PayloadKind::Factor, "factor|" + canonical_string(kernel) + "|" + grid_key(grid));
    if (auto hit = cache->load(header); hit && hit->rows() == Eigen::Index(grid.size())) return *hit;
  }
  Eigen::MatrixXd root = psd_factor(covariance_matrix(kernel, grid)).root;
  if (cache) cache->store(header, root);
  return root;
}

void standard_normals(std::uint64_t seed, std::uint64_t first, RowMatrixXd& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    NormalStream stream(seed, first + static_cast<std::uint64_t>(i));
    double* row = z.row(i).data();
    for (Eigen::Index j = 0; j < z.cols(); ++j) row[j] = stream.next();
  }
}

PathEnsemble sample_paths(const CovarianceKernel& kernel, const GridSpec& grid, std::int64_t n_samples,
                          std::uint64_t seed, const SamplingOptions& options) {
  require(n_samples >= 1, ErrorCode::InvalidArgument, "n_samples must be positive");
  const Eigen::MatrixXd root = covariance_root(kernel, grid, options);
  const auto n = static_cast<Eigen::Index>(grid.size());
  PathEnsemble ens{grid, kernel, seed, RowMatrixXd(n_samples, n)};
  for_each_chunk(n_samples, options.threads, [&](Eigen::Index first, Eigen::Index rows) {
    RowMatrixXd z(rows, n);
    standard_normals(seed, static_cast<std::uint64_t>(first), z);
    ens.paths.middleRows(first, rows).noalias() = z * root;
  });
  return ens;
}

std::vector<double> sample_norms(const CovarianceKernel& kernel, const GridSpec& grid, const NormSpec& norm,
                                 std::int64_t n_samples, std::uint64_t seed, const SamplingOptions& options) {
  require(n_samples >= 1, ErrorCode::InvalidArgument, "n_samples must be positive");
  validate_norm(norm);
  validate_grid(grid);
  validate_kernel(kernel, grid);

  std::optional<ArtifactCache> cache;
  BinaryHeader header;
  if (options.cache_dir && !options.cache_dir->empty()) {
    cache.emplace(*options.cache_dir);
    const std::string key = "norms|" + canonical_string(kernel) + "|" + grid_key(grid) + "|" + norm.to_string() +
                            "|n=" + std::to_string(n_samples) + "|seed=" + std::to_string(seed);
    header = make_header(kernel, grid, PayloadKind::Norms, key);
    if (auto hit = cache->load(header); hit && hit->size() == n_samples)
      return std::vector<double>(hit->data(), hit->data() + hit->size());
  }

  const Eigen::MatrixXd root = covariance_root(kernel, grid, options);
  const NormEvaluator eval(grid, norm);
  const auto n = static_cast<Eigen::Index>(grid.size());
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  for_each_chunk(n_samples, options.threads, [&](Eigen::Index first, Eigen::Index rows) {
    RowMatrixXd z(rows, n);
    standard_normals(seed, static_cast<std::uint64_t>(first), z);
    const RowMatrixXd p = z * root;
    for (Eigen::Index i = 0; i < rows; ++i) out[static_cast<std::size_t>(first + i)] = eval(p.row(i));
  });

  if (cache) cache->store(header, Eigen::Map<const RowMatrixXd>(out.data(), n_samples, 1));
  return out;
}

}  // namespace qgauss
