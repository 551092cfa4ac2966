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
#include <vector>

#include "qgauss/errors.hpp"
#include "qgauss/grid.hpp"
#include "qgauss/kernels.hpp"

namespace qgauss {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

struct QuadratureOptions {
  int refinement = 4;     // initial quadrature nodes per target interval
  double tolerance = 1e-6;  // max-norm change between successive doublings
  std::size_t max_weight_entries = std::size_t{1} << 26;
};

/// Covariance of the Riemann-Liouville process of order `beta` (or, per
/// axis, of the m-integrated sheet with beta = m) on `grid`, from the double
/// integral  int int k(t,u) k(s,v) min(u,v) du dv  with
/// k(t,u) = (t-u)^{beta-1} / Gamma(beta). The kernel factor is integrated
/// exactly against a piecewise-linear interpolant of the Brownian covariance
/// on a sub-grid, refined by doubling until successive matrices agree.
Eigen::MatrixXd integrated_covariance(double beta, const GridSpec& grid, const QuadratureOptions& options = {});

/// One quadrature pass at a fixed refinement; exposed for convergence tests.
Eigen::MatrixXd integrated_covariance_1d(double beta, int points, int refinement);

/// Entry (i, j) is K(t_i, t_j) on the flattened grid; exactly symmetric.
template <typename Scalar = double>
Matrix<Scalar> covariance_matrix(const CovarianceKernel& kernel, const GridSpec& grid,
                                 std::size_t cap = GridSpec::kDefaultCap) {
  validate_grid(grid, cap);
  validate_kernel(kernel, grid);
  if (const auto* k = std::get_if<IntegratedBM>(&kernel))
    return integrated_covariance(k->beta, grid).template cast<Scalar>();
  if (const auto* k = std::get_if<IntegratedSheet>(&kernel))
    return integrated_covariance(static_cast<double>(k->m), grid).template cast<Scalar>();

  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto d = static_cast<std::size_t>(grid.dim);
  std::vector<Scalar> pts(static_cast<std::size_t>(n) * d);
  std::vector<double> buf(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    grid.point(static_cast<std::size_t>(i), buf);
    for (std::size_t a = 0; a < d; ++a) pts[static_cast<std::size_t>(i) * d + a] = Scalar(buf[a]);
  }
  Matrix<Scalar> cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::span<const Scalar> s(pts.data() + static_cast<std::size_t>(i) * d, d);
    for (Eigen::Index j = i; j < n; ++j) {
      std::span<const Scalar> t(pts.data() + static_cast<std::size_t>(j) * d, d);
      cov(i, j) = kernel_value<Scalar>(kernel, s, t);
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

/// Symmetric square root of a covariance matrix. Eigenvalues below zero are
/// clipped when they are within `relative_tolerance` of the largest one;
/// anything more negative throws FactorizationFailure.
struct CovarianceFactor {
  Eigen::MatrixXd root;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  Eigen::Index clipped = 0;
};

CovarianceFactor psd_factor(const Eigen::MatrixXd& covariance, double relative_tolerance = 1e-8);

}  // namespace qgauss
