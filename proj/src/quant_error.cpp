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

#include "qgauss/quant_error.hpp"

#include <cmath>

#include "qgauss/errors.hpp"
#include "qgauss/numerics.hpp"

namespace qgauss {

std::string_view to_string(ErrorMethod method) {
  switch (method) {
    case ErrorMethod::BallMomentMC: return "BALL_MOMENT_MC";
    case ErrorMethod::UpperBound: return "UPPER_BOUND";
    case ErrorMethod::Asymptotic: return "ASYMPTOTIC";
  }
  return "UNKNOWN";
}

void validate_query(const ErrorQuery& query) {
  require(std::isfinite(query.R) && query.R > 0.0, ErrorCode::InvalidArgument, "rate R must be positive");
  require(query.alpha.is_infinite() || query.alpha.value() > 1.0, ErrorCode::InvalidArgument,
          "entropy order must exceed 1");
}

double effective_rate(EntropyOrder alpha, double R) {
  if (alpha.is_infinite()) return R;
  require(alpha.value() > 1.0, ErrorCode::InvalidArgument, "entropy order must exceed 1");
  return (alpha.value() - 1.0) / alpha.value() * R;
}

ErrorEstimate ball_moment_error(std::span<const double> norms, const SmallBallTable& table, const Distortion& rho,
                                double R) {
  require(std::isfinite(R) && R > 0.0, ErrorCode::InvalidArgument, "rate R must be positive");
  require(!norms.empty(), ErrorCode::InvalidArgument, "no sampled norms");
  const double n = static_cast<double>(norms.size());
  require(std::exp(-R) >= 30.0 / n, ErrorCode::ResolutionExceeded,
          "e^{-R} below 30 / n_samples; raise n_samples for R = " + std::to_string(R));
  const double s = invert_b(table, R);
  NeumaierSum sum, sum2;
  for (double x : norms) {
    if (x > s) continue;
    const double v = distortion_value(x, rho);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum.value() / n;
  const double var = std::max(0.0, sum2.value() / n - mean * mean) * n / std::max(1.0, n - 1.0);
  return {mean, std::sqrt(var / n), s, ErrorMethod::BallMomentMC};
}

ErrorEstimate ball_moment_error(const CovarianceKernel& kernel, const GridSpec& grid, const NormSpec& norm,
                                const Distortion& rho, double R, std::int64_t n_samples, std::uint64_t seed,
                                const SmallBallTable& table, const SamplingOptions& options) {
  const auto norms = sample_norms(kernel, grid, norm, n_samples, seed, options);
  return ball_moment_error(norms, table, rho, R);
}

double upper_bound_mass(const SmallBallTable& table, const Distortion& rho, double R) {
  return distortion_value(invert_b(table, R), rho) * std::exp(-R);
}

double upper_bound_mass(const AsymptoticLaw& law, const Distortion& rho, double R) {
  return distortion_value(invert_asymptotic(law, R), rho) * std::exp(-R);
}

ErrorEstimate alpha_upper_bound(double alpha, double R, std::span<const double> norms, const SmallBallTable& table,
                                const Distortion& rho) {
  require(alpha > 1.0, ErrorCode::InvalidArgument, "entropy order must exceed 1");
  ErrorEstimate e = ball_moment_error(norms, table, rho, effective_rate(EntropyOrder(alpha), R));
  e.method = ErrorMethod::UpperBound;
  return e;
}

double asymptotic_error(const AsymptoticLaw& law, const Distortion& rho, EntropyOrder alpha, double R) {
  const double r_eff = effective_rate(alpha, R);
  return std::pow(invert_asymptotic(law, r_eff), rho.r()) * std::exp(-r_eff);
}

RatioReport ratio_report(std::span<const double> rates, std::span<const ErrorEstimate> estimates,
                         const std::function<double(double)>& formula) {
  require(rates.size() == estimates.size(), ErrorCode::DimensionMismatch, "one estimate per rate");
  require(rates.size() >= 3, ErrorCode::InvalidArgument, "ratio report needs at least 3 rates");
  RatioReport rep;
  std::vector<double> gap;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    RatioRow row;
    row.R = rates[i];
    row.estimate = estimates[i].value;
    row.std_error = estimates[i].std_error;
    row.formula = formula(rates[i]);
    row.ratio = row.estimate / row.formula;
    row.ratio_std_error = row.std_error / row.formula;
    gap.push_back(std::abs(row.ratio - 1.0));
    rep.rows.push_back(row);
  }
  rep.trend = kendall_tau(rates, gap);
  return rep;
}

}  // namespace qgauss
