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

#include "qgauss/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qgauss {

Eigen::MatrixXd integrated_covariance_1d(double beta, int points, int refinement) {
  require(beta > 0.0, ErrorCode::KernelParameterOutOfRange, "integration order must be > 0");
  require(points >= 1 && refinement >= 1, ErrorCode::InvalidArgument, "quadrature sizes must be positive");
  const int intervals = points == 1 ? refinement : refinement * (points - 1);
  const int nq = intervals + 1;
  const double h = 1.0 / intervals;
  auto node = [&](int k) { return points == 1 ? intervals : k * refinement; };
  auto u = [&](int l) { return static_cast<double>(l) * h; };

  // W(j, l): weight of node l in  int_0^{t_j} (t_j - u)^{beta-1} g(u) du / Gamma(beta)
  // for piecewise-linear g.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(points, nq);
  const double inv_gamma = 1.0 / std::tgamma(beta);
  for (int j = 0; j < points; ++j) {
    const int K = node(j);
    for (int c = 0; c < K; ++c) {
      const double a = u(K - c - 1);
      const double b = u(K - c);
      const double i0 = (std::pow(b, beta) - std::pow(a, beta)) / beta;
      const double i1 = (std::pow(b, beta + 1.0) - std::pow(a, beta + 1.0)) / (beta + 1.0);
      w(j, c) += (i1 - a * i0) / h * inv_gamma;
      w(j, c + 1) += (b * i0 - i1) / h * inv_gamma;
    }
  }
  // G = M W^T with M(k, l) = min(u_k, u_l), by prefix sums.
  Eigen::MatrixXd g(nq, points);
  for (int j = 0; j < points; ++j) {
    double total = w.row(j).sum();
    double lower = 0.0, seen = 0.0;
    for (int k = 0; k < nq; ++k) {
      lower += u(k) * w(j, k);
      seen += w(j, k);
      g(k, j) = lower + u(k) * (total - seen);
    }
  }
  Eigen::MatrixXd cov = w * g;
  for (int i = 0; i < points; ++i)
    for (int j = i + 1; j < points; ++j) cov(j, i) = cov(i, j);
  return cov;
}

Eigen::MatrixXd integrated_covariance(double beta, const GridSpec& grid, const QuadratureOptions& options) {
  validate_grid(grid, std::numeric_limits<std::size_t>::max());
  require(options.refinement >= 4, ErrorCode::InvalidArgument, "quadrature refinement must be at least 4");
  const int n = grid.points_per_axis;
  auto entries = [&](int refinement) {
    const double intervals = n == 1 ? refinement : static_cast<double>(refinement) * (n - 1);
    return static_cast<double>(n) * (intervals + 1.0);
  };
  int refinement = options.refinement;
  require(entries(refinement) <= static_cast<double>(options.max_weight_entries),
          ErrorCode::QuadratureResolutionTooCoarse, "initial quadrature grid exceeds the memory cap");
  Eigen::MatrixXd prev = integrated_covariance_1d(beta, n, refinement);
  Eigen::MatrixXd axis;
  while (true) {
    if (entries(2 * refinement) > static_cast<double>(options.max_weight_entries))
      fail(ErrorCode::QuadratureResolutionTooCoarse,
           "quadrature did not reach tolerance before the memory cap (refinement " + std::to_string(refinement) + ")");
    refinement *= 2;
    Eigen::MatrixXd next = integrated_covariance_1d(beta, n, refinement);
    const double change = (next - prev).cwiseAbs().maxCoeff();
    prev = std::move(next);
    if (change < options.tolerance) break;
  }
  axis = std::move(prev);
  if (grid.dim == 1) return axis;

  const auto total = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd cov(total, total);
  const auto nn = static_cast<std::size_t>(n);
  for (Eigen::Index i = 0; i < total; ++i) {
    for (Eigen::Index j = i; j < total; ++j) {
      double v = 1.0;
      auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      for (int d = 0; d < grid.dim; ++d) {
        v *= axis(static_cast<Eigen::Index>(a % nn), static_cast<Eigen::Index>(b % nn));
        a /= nn;
        b /= nn;
      }
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

CovarianceFactor psd_factor(const Eigen::MatrixXd& covariance, double relative_tolerance) {
  require(covariance.rows() == covariance.cols(), ErrorCode::DimensionMismatch, "covariance must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  require(solver.info() == Eigen::Success, ErrorCode::FactorizationFailure, "eigendecomposition did not converge");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  CovarianceFactor f;
  f.min_eigenvalue = lambda.minCoeff();
  f.max_eigenvalue = lambda.maxCoeff();
  const double floor = -relative_tolerance * std::max(f.max_eigenvalue, 0.0);
  require(f.min_eigenvalue >= floor, ErrorCode::FactorizationFailure,
          "covariance has eigenvalue " + std::to_string(f.min_eigenvalue) + " below the repair threshold");
  Eigen::VectorXd root_lambda(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < 0.0) ++f.clipped;
    root_lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  f.root = v * root_lambda.asDiagonal() * v.transpose();
  f.root = (0.5 * (f.root + f.root.transpose())).eval();
  return f;
}

}  // namespace qgauss
