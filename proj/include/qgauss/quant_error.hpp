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

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "qgauss/entropy.hpp"
#include "qgauss/path_norms.hpp"
#include "qgauss/sampling.hpp"
#include "qgauss/small_ball.hpp"

namespace qgauss {

enum class ErrorMethod { BallMomentMC, UpperBound, Asymptotic };

std::string_view to_string(ErrorMethod method);

/// Rate R in nats, order alpha in ]1, inf] and distortion x^r.
struct ErrorQuery {
  double R = 1.0;
  EntropyOrder alpha = EntropyOrder::infinity();
  Distortion rho{1.0};
};

void validate_query(const ErrorQuery& query);

struct ErrorEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double radius_used = 0.0;
  ErrorMethod method = ErrorMethod::BallMomentMC;
};

/// R for alpha = inf, otherwise (alpha - 1) / alpha * R.
double effective_rate(EntropyOrder alpha, double R);

/// Monte Carlo E[rho(|X|) 1{|X| <= s}] with mu(B(0, s)) = e^{-R} read off
/// the table. `norms` is the ensemble the expectation is taken over.
/// Throws ResolutionExceeded when e^{-R} < 30 / norms.size().
ErrorEstimate ball_moment_error(std::span<const double> norms, const SmallBallTable& table, const Distortion& rho,
                                double R);

/// Samples a fresh norm ensemble and evaluates the ball moment on it.
ErrorEstimate ball_moment_error(const CovarianceKernel& kernel, const GridSpec& grid, const NormSpec& norm,
                                const Distortion& rho, double R, std::int64_t n_samples, std::uint64_t seed,
                                const SmallBallTable& table, const SamplingOptions& options = {});

/// rho(b^{-1}(R)) e^{-R} through the table or through a law.
double upper_bound_mass(const SmallBallTable& table, const Distortion& rho, double R);
double upper_bound_mass(const AsymptoticLaw& law, const Distortion& rho, double R);

/// Ball moment at the reduced rate (alpha - 1) / alpha * R.
ErrorEstimate alpha_upper_bound(double alpha, double R, std::span<const double> norms, const SmallBallTable& table,
                                const Distortion& rho);

/// [b^{-1}(R_eff)]^r e^{-R_eff} with the closed-form inverse of the law.
double asymptotic_error(const AsymptoticLaw& law, const Distortion& rho, EntropyOrder alpha, double R);

struct RatioRow {
  double R = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double formula = 0.0;
  double ratio = 0.0;
  double ratio_std_error = 0.0;
};

struct RatioReport {
  std::vector<RatioRow> rows;
  /// Kendall tau-b of |ratio - 1| against R; non-positive means the
  /// estimates approach the formula as R grows.
  double trend = 0.0;
};

RatioReport ratio_report(std::span<const double> rates, std::span<const ErrorEstimate> estimates,
                         const std::function<double(double)>& formula);

}  // namespace qgauss
