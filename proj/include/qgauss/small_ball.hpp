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
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qgauss/grid.hpp"
#include "qgauss/kernels.hpp"
#include "qgauss/numerics.hpp"
#include "qgauss/path_norms.hpp"
#include "qgauss/sampling.hpp"

namespace qgauss {

/// Estimated mu(B(0, s)) on an increasing radius grid.
struct SmallBallTable {
  std::vector<double> radii;
  std::vector<double> raw_p;      // empirical fractions before repair
  std::vector<double> p_hat;      // isotonic repair of raw_p
  std::vector<double> std_error;  // sqrt(p_hat (1 - p_hat) / n_samples)
  std::int64_t n_samples = 0;

  std::optional<CovarianceKernel> kernel;
  std::optional<GridSpec> grid;
  std::optional<NormSpec> norm;

  std::size_t size() const noexcept { return radii.size(); }
  /// False where p_hat is zero: the radius is below Monte Carlo resolution.
  bool usable(std::size_t i) const noexcept { return p_hat[i] > 0.0; }
};

/// Table from probabilities on a radius grid; applies the repair and fills
/// the standard errors for the given sample size.
SmallBallTable make_table(std::vector<double> radii, std::vector<double> probabilities, std::int64_t n_samples);

/// Fraction of `norms` inside each radius (shared ensemble for all radii).
SmallBallTable tabulate_small_ball(std::span<const double> norms, std::span<const double> radii);

SmallBallTable estimate_small_ball(const CovarianceKernel& kernel, const GridSpec& grid, const NormSpec& norm,
                                   std::span<const double> radii, std::int64_t n_samples, std::uint64_t seed,
                                   const SamplingOptions& options = {});

/// Interpolated b(s) = -log mu(B(0, s)) through the usable table entries.
/// Monotone cubic in (log s, log b); the last segment down to b = 0, if any,
/// is linear in (s, b).
class BFunction {
 public:
  BFunction(std::vector<double> s, std::vector<double> b);

  double operator()(double s) const;
  /// Radius with b(s) = R. Knot values map back to knot radii exactly.
  double inverse(double R) const;

  double min_b() const noexcept { return b_.back(); }
  double max_b() const noexcept { return b_.front(); }
  std::span<const double> radii() const noexcept { return s_; }
  std::span<const double> values() const noexcept { return b_; }

 private:
  std::vector<double> s_, b_;
  std::size_t positive_ = 0;  // knots with b > 0
  MonotoneCubic log_log_;
};

/// Throws NoUsableEntries when every p_hat is zero.
BFunction b_function(const SmallBallTable& table);

/// Throws OutOfTableRange when R is outside [min b, max b].
double invert_b(const SmallBallTable& table, double R);

/// b(s) ~ c (1/s)^a (log 1/s)^b.
struct AsymptoticLaw {
  double c = 1.0;
  double a = 1.0;
  double b = 0.0;
  std::optional<double> r;
};

void validate_law(const AsymptoticLaw& law);

/// Evaluates the law itself at s in ]0, 1[.
double law_value(const AsymptoticLaw& law, double s);

/// c^{1/a} a^{-b/a} R^{-1/a} (log R)^{b/a}; DomainError for R <= 1 when b != 0.
double invert_asymptotic(const AsymptoticLaw& law, double R);

struct FitWindow {
  double lo = 0.0;
  double hi = 1.0;
};

struct AsymptoticFit {
  AsymptoticLaw law;
  Eigen::Vector3d std_error = Eigen::Vector3d::Zero();  // (log c, a, b); b entry is 0 when forced
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double condition_number = 0.0;
  double chi2 = 0.0;
  std::size_t rows = 0;
  bool forced_b = false;
};

/// Weighted least squares of log b on (1, log 1/s, log log 1/s).
AsymptoticFit fit_asymptotic(std::span<const double> s, std::span<const double> b, std::span<const double> weights,
                             std::optional<double> forced_b = std::nullopt);

/// Fits over table entries in the window with at least 30 hits, p < 1 and
/// s < 1 (s < 1/e unless b is forced). Weights are inverse variances of
/// log b propagated from the binomial standard errors.
AsymptoticFit fit_asymptotic(const SmallBallTable& table, const FitWindow& window,
                             std::optional<double> forced_b = std::nullopt);

/// mu(B(0, eta s)) / mu(B(0, s)) implied by a law, sampled on a window.
struct RatioConditionReport {
  double eta = 0.5;
  std::vector<double> s;
  std::vector<double> ratio;
  std::vector<double> violations;  // s values where the ratio failed to increase
  bool holds() const noexcept { return violations.empty(); }
};

RatioConditionReport ratio_condition(const AsymptoticLaw& law, const FitWindow& window, double eta = 0.5,
                                     int points = 64);

/// `s,n_samples,p_hat,stderr,b_hat` with 17 significant digits.
void write_small_ball_csv(std::ostream& os, const SmallBallTable& table);
SmallBallTable read_small_ball_csv(std::istream& is);

}  // namespace qgauss
