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

#include "qgauss/small_ball.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "qgauss/errors.hpp"

namespace qgauss {
namespace {

void validate_radii(std::span<const double> radii) {
  require(!radii.empty(), ErrorCode::InvalidArgument, "radius grid is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(std::isfinite(radii[i]) && radii[i] > 0.0, ErrorCode::InvalidArgument, "radii must be positive");
    if (i > 0) require(radii[i] > radii[i - 1], ErrorCode::InvalidArgument, "radii must increase strictly");
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SmallBallTable make_table(std::vector<double> radii, std::vector<double> probabilities, std::int64_t n_samples) {
  validate_radii(radii);
  require(probabilities.size() == radii.size(), ErrorCode::DimensionMismatch, "one probability per radius");
  require(n_samples >= 1, ErrorCode::InvalidArgument, "n_samples must be positive");
  for (double p : probabilities)
    require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidArgument, "probabilities must lie in [0, 1]");

  SmallBallTable t;
  t.n_samples = n_samples;
  t.radii = std::move(radii);
  t.raw_p = std::move(probabilities);
  const std::vector<double> ones(t.raw_p.size(), 1.0);
  t.p_hat = isotonic_nondecreasing(t.raw_p, ones);
  t.std_error.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    t.std_error[i] = std::sqrt(t.p_hat[i] * (1.0 - t.p_hat[i]) / static_cast<double>(n_samples));
  return t;
}

SmallBallTable tabulate_small_ball(std::span<const double> norms, std::span<const double> radii) {
  validate_radii(radii);
  require(!norms.empty(), ErrorCode::InvalidArgument, "no sampled norms");
  std::vector<double> sorted(norms.begin(), norms.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> p(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), radii[i]) - sorted.begin();
    p[i] = static_cast<double>(count) / n;
  }
  return make_table(std::vector<double>(radii.begin(), radii.end()), std::move(p),
                    static_cast<std::int64_t>(sorted.size()));
}

SmallBallTable estimate_small_ball(const CovarianceKernel& kernel, const GridSpec& grid, const NormSpec& norm,
                                   std::span<const double> radii, std::int64_t n_samples, std::uint64_t seed,
                                   const SamplingOptions& options) {
  validate_radii(radii);
  require(n_samples >= 1000, ErrorCode::InvalidArgument, "small-ball estimation needs at least 1000 samples");
  const auto norms = sample_norms(kernel, grid, norm, n_samples, seed, options);
  SmallBallTable t = tabulate_small_ball(norms, radii);
  t.kernel = kernel;
  t.grid = grid;
  t.norm = norm;
  return t;
}

BFunction::BFunction(std::vector<double> s, std::vector<double> b) : s_(std::move(s)), b_(std::move(b)) {
  require(!s_.empty() && s_.size() == b_.size(), ErrorCode::NoUsableEntries, "b-function needs usable knots");
  for (std::size_t i = 0; i < s_.size(); ++i) {
    require(b_[i] >= 0.0 && std::isfinite(b_[i]), ErrorCode::InvalidArgument, "b values must be finite and >= 0");
    if (i > 0) {
      require(s_[i] > s_[i - 1], ErrorCode::InvalidArgument, "b-function radii must increase strictly");
      require(b_[i] < b_[i - 1], ErrorCode::InvalidArgument, "b values must decrease strictly");
    }
  }
  positive_ = static_cast<std::size_t>(std::count_if(b_.begin(), b_.end(), [](double v) { return v > 0.0; }));
  if (positive_ > 0) {
    std::vector<double> x(positive_), y(positive_);
    for (std::size_t i = 0; i < positive_; ++i) {
      x[i] = std::log(s_[i]);
      y[i] = std::log(b_[i]);
    }
    log_log_ = MonotoneCubic(std::move(x), std::move(y));
  }
}

double BFunction::operator()(double s) const {
  require(s >= s_.front(), ErrorCode::OutOfTableRange, "radius below the table");
  if (positive_ > 0 && s <= s_[positive_ - 1]) {
    std::size_t k = static_cast<std::size_t>(std::lower_bound(s_.begin(), s_.begin() + positive_, s) - s_.begin());
    if (k < positive_ && s_[k] == s) return b_[k];
    return std::exp(log_log_(std::log(s)));
  }
  if (positive_ == s_.size()) fail(ErrorCode::OutOfTableRange, "radius above the table");
  const double zero_at = s_[positive_];
  if (s >= zero_at) return 0.0;
  const double s0 = s_[positive_ - 1], b0 = b_[positive_ - 1];
  return b0 * (zero_at - s) / (zero_at - s0);
}

double BFunction::inverse(double R) const {
  require(std::isfinite(R) && R >= min_b() && R <= max_b(), ErrorCode::OutOfTableRange,
          "rate " + fmt17(R) + " outside table range [" + fmt17(min_b()) + ", " + fmt17(max_b()) + "]");
  for (std::size_t i = 0; i < b_.size(); ++i)
    if (b_[i] == R) return s_[i];
  if (R < b_[positive_ - 1]) {
    const double s0 = s_[positive_ - 1], b0 = b_[positive_ - 1], zero_at = s_[positive_];
    return s0 + (b0 - R) / b0 * (zero_at - s0);
  }
  // b_[k] > R > b_[k + 1] with both knots on the log-log interpolant.
  std::size_t k = 0;
  while (b_[k + 1] > R) ++k;
  const double target = std::log(R);
  double lo = std::log(s_[k]), hi = std::log(s_[k + 1]);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (log_log_(mid) > target) lo = mid;
    else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

BFunction b_function(const SmallBallTable& table) {
  std::vector<double> s, b;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!table.usable(i)) continue;
    // Ties from pooling collapse onto their smallest radius.
    if (!b.empty() && table.p_hat[i] == table.p_hat[i - 1]) continue;
    const double v = table.p_hat[i] >= 1.0 ? 0.0 : -std::log(table.p_hat[i]);
    s.push_back(table.radii[i]);
    b.push_back(v);
    if (v == 0.0) break;
  }
  require(!s.empty(), ErrorCode::NoUsableEntries, "no table entry has positive probability");
  return BFunction(std::move(s), std::move(b));
}

double invert_b(const SmallBallTable& table, double R) { return b_function(table).inverse(R); }

void validate_law(const AsymptoticLaw& law) {
  require(std::isfinite(law.c) && law.c > 0.0, ErrorCode::InvalidArgument, "law constant c must be positive");
  require(std::isfinite(law.a) && law.a > 0.0, ErrorCode::InvalidArgument, "law exponent a must be positive");
  require(std::isfinite(law.b), ErrorCode::InvalidArgument, "law exponent b must be finite");
  if (law.r) require(std::isfinite(*law.r) && *law.r > 0.0, ErrorCode::InvalidArgument, "r must be positive");
}

double law_value(const AsymptoticLaw& law, double s) {
  validate_law(law);
  require(s > 0.0 && (law.b == 0.0 || s < 1.0), ErrorCode::DomainError, "law needs 0 < s < 1");
  const double v = law.c * std::pow(s, -law.a);
  return law.b == 0.0 ? v : v * std::pow(std::log(1.0 / s), law.b);
}

double invert_asymptotic(const AsymptoticLaw& law, double R) {
  validate_law(law);
  require(std::isfinite(R) && R > 0.0, ErrorCode::DomainError, "rate must be positive");
  const double base = std::pow(law.c, 1.0 / law.a) * std::pow(R, -1.0 / law.a);
  if (law.b == 0.0) return base;
  require(R > 1.0, ErrorCode::DomainError, "inverse with b != 0 needs R > 1");
  return base * std::pow(law.a, -law.b / law.a) * std::pow(std::log(R), law.b / law.a);
}

AsymptoticFit fit_asymptotic(std::span<const double> s, std::span<const double> b, std::span<const double> weights,
                             std::optional<double> forced_b) {
  require(s.size() == b.size() && s.size() == weights.size(), ErrorCode::DimensionMismatch,
          "fit inputs must have equal length");
  const Eigen::Index n = static_cast<Eigen::Index>(s.size());
  const Eigen::Index k = forced_b ? 2 : 3;
  require(n >= 5, ErrorCode::InsufficientData, "fit needs at least 5 rows, got " + std::to_string(n));

  Eigen::MatrixXd x(n, k);
  Eigen::VectorXd y(n), sw(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double si = s[static_cast<std::size_t>(i)];
    require(si > 0.0 && si < 1.0, ErrorCode::DomainError, "fit radii must lie in ]0, 1[");
    if (!forced_b) require(si < std::exp(-1.0), ErrorCode::DomainError, "three-parameter fit needs s < 1/e");
    require(b[static_cast<std::size_t>(i)] > 0.0, ErrorCode::DomainError, "fit needs b > 0");
    require(weights[static_cast<std::size_t>(i)] > 0.0, ErrorCode::InvalidArgument, "fit weights must be positive");
    const double l = std::log(1.0 / si);
    const double ll = std::log(l);
    x(i, 0) = 1.0;
    x(i, 1) = l;
    if (!forced_b) x(i, 2) = ll;
    y(i) = std::log(b[static_cast<std::size_t>(i)]) - (forced_b ? *forced_b * ll : 0.0);
    sw(i) = std::sqrt(weights[static_cast<std::size_t>(i)]);
  }

  AsymptoticFit fit;
  fit.rows = static_cast<std::size_t>(n);
  fit.forced_b = forced_b.has_value();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues();
  fit.condition_number = sv(k - 1) > 0.0 ? sv(0) / sv(k - 1) : std::numeric_limits<double>::infinity();
  require(fit.condition_number <= 1e8, ErrorCode::IllConditionedFit,
          "design condition number " + fmt17(fit.condition_number) + " exceeds 1e8");

  const Eigen::MatrixXd xw = sw.asDiagonal() * x;
  const Eigen::VectorXd yw = sw.cwiseProduct(y);
  const Eigen::VectorXd beta = xw.colPivHouseholderQr().solve(yw);
  fit.chi2 = (yw - xw * beta).squaredNorm();
  const double scale = n > k ? fit.chi2 / static_cast<double>(n - k) : 0.0;
  const Eigen::MatrixXd cov = (xw.transpose() * xw).inverse() * scale;
  fit.covariance.topLeftCorner(k, k) = cov;
  for (Eigen::Index i = 0; i < k; ++i) fit.std_error(i) = std::sqrt(cov(i, i));

  fit.law.c = std::exp(beta(0));
  fit.law.a = beta(1);
  fit.law.b = forced_b ? *forced_b : beta(2);
  return fit;
}

AsymptoticFit fit_asymptotic(const SmallBallTable& table, const FitWindow& window, std::optional<double> forced_b) {
  std::vector<double> s, b, w;
  const double n = static_cast<double>(table.n_samples);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double si = table.radii[i], p = table.p_hat[i];
    if (si < window.lo || si > window.hi || si >= 1.0) continue;
    if (!forced_b && si >= std::exp(-1.0)) continue;
    if (p >= 1.0 || std::llround(p * n) < 30) continue;
    const double lp = std::log(p);
    s.push_back(si);
    b.push_back(-lp);
    w.push_back(n * p * lp * lp / (1.0 - p));
  }
  return fit_asymptotic(s, b, w, forced_b);
}

RatioConditionReport ratio_condition(const AsymptoticLaw& law, const FitWindow& window, double eta, int points) {
  validate_law(law);
  require(eta > 0.0 && eta < 1.0, ErrorCode::InvalidArgument, "eta must lie in ]0, 1[");
  require(points >= 2, ErrorCode::InvalidArgument, "ratio check needs at least two points");
  require(window.lo > 0.0 && window.hi > window.lo && window.hi < 1.0, ErrorCode::InvalidArgument,
          "ratio window must satisfy 0 < lo < hi < 1");
  RatioConditionReport rep;
  rep.eta = eta;
  const double l0 = std::log(window.lo), l1 = std::log(window.hi);
  for (int i = 0; i < points; ++i) {
    const double si = std::exp(l0 + (l1 - l0) * i / (points - 1));
    const double q = std::exp(law_value(law, si) - law_value(law, eta * si));
    if (!rep.ratio.empty() && q < rep.ratio.back()) rep.violations.push_back(si);
    rep.s.push_back(si);
    rep.ratio.push_back(q);
  }
  return rep;
}

void write_small_ball_csv(std::ostream& os, const SmallBallTable& table) {
  os << "s,n_samples,p_hat,stderr,b_hat\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    os << fmt17(table.radii[i]) << ',' << table.n_samples << ',' << fmt17(table.p_hat[i]) << ','
       << fmt17(table.std_error[i]) << ',';
    if (table.usable(i)) os << fmt17(table.p_hat[i] >= 1.0 ? 0.0 : -std::log(table.p_hat[i]));
    os << '\n';
  }
}

SmallBallTable read_small_ball_csv(std::istream& is) {
  std::string line;
  require(bool(std::getline(is, line)), ErrorCode::InvalidArgument, "empty small-ball CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "s,n_samples,p_hat,stderr,b_hat", ErrorCode::InvalidArgument, "unexpected CSV header: " + line);
  std::vector<double> radii, p;
  std::int64_t n = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell[5];
    for (auto& c : cell) std::getline(row, c, ',');
    try {
      radii.push_back(std::stod(cell[0]));
      const auto ni = std::stoll(cell[1]);
      require(n == 0 || ni == n, ErrorCode::InvalidArgument, "n_samples must be constant across rows");
      n = ni;
      p.push_back(std::stod(cell[2]));
    } catch (const std::logic_error&) {
      fail(ErrorCode::InvalidArgument, "malformed CSV row: " + line);
    }
  }
  return make_table(std::move(radii), std::move(p), n);
}

}  // namespace qgauss
