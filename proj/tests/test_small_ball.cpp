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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "qgauss/errors.hpp"
#include "qgauss/small_ball.hpp"

using namespace qgauss;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

// Table whose b function is exactly s^{-2} at every knot.
SmallBallTable inverse_square_table(const std::vector<double>& radii) {
  std::vector<double> p;
  for (double s : radii) p.push_back(std::exp(-1.0 / (s * s)));
  return make_table(radii, p, 1000000);
}

}  // namespace

TEST_CASE("table invariants after isotonic repair") {
  const std::vector<double> radii{0.1, 0.2, 0.3, 0.4, 0.5};
  const auto t = make_table(radii, {0.1, 0.3, 0.2, 0.5, 0.4}, 100);
  CHECK(t.raw_p[2] == 0.2);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t.p_hat[i] >= t.p_hat[i - 1]);
  CHECK(t.p_hat[1] == doctest::Approx(0.25));
  CHECK(t.p_hat[2] == doctest::Approx(0.25));
  CHECK(t.p_hat[4] == doctest::Approx(0.45));
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(t.std_error[i] == doctest::Approx(std::sqrt(t.p_hat[i] * (1 - t.p_hat[i]) / 100)));

  CHECK(code_of([] { make_table({0.2, 0.1}, {0.1, 0.2}, 10); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { make_table({0.1, 0.2}, {0.1, 1.2}, 10); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { make_table({0.1, 0.2}, {0.1}, 10); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("tabulation counts closed balls") {
  const std::vector<double> norms{0.5, 1.0, 1.0, 2.0};
  const auto t = tabulate_small_ball(norms, std::vector<double>{0.4, 1.0, 1.5, 1e3});
  CHECK(t.raw_p == std::vector<double>{0.0, 0.75, 0.75, 1.0});
  CHECK_FALSE(t.usable(0));
  CHECK(t.usable(1));
  CHECK(t.n_samples == 4);
}

TEST_CASE("estimator limits and shared ensemble") {
  const CovarianceKernel bm = FractionalBrownianSheet{{0.5}};
  const auto grid = make_grid(1, 64);
  const std::vector<double> radii{1e-6, 0.5, 0.8, 1.0, 1e3 * 5.0};
  const auto t = estimate_small_ball(bm, grid, NormSpec::sup(), radii, 20000, 3);
  CHECK(t.p_hat.front() == 0.0);
  CHECK(t.p_hat.back() == 1.0);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t.raw_p[i] >= t.raw_p[i - 1]);
  CHECK(t.kernel.has_value());
  CHECK(t.norm == NormSpec::sup());

  const auto again = estimate_small_ball(bm, grid, NormSpec::sup(), radii, 20000, 3);
  CHECK(again.raw_p == t.raw_p);
  CHECK(code_of([&] { estimate_small_ball(bm, grid, NormSpec::sup(), radii, 999, 3); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("discrete BM sup matches the shifted reflection series") {
  const int points = 257;
  const double dt = 1.0 / (points - 1);
  const CovarianceKernel bm = FractionalBrownianSheet{{0.5}};
  const std::vector<double> radii{0.6, 0.8, 1.0, 1.2};
  const std::int64_t n = 200000;
  const auto t = estimate_small_ball(bm, make_grid(1, points), NormSpec::sup(), radii, n, 19);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double shifted = oracle::brownian_sup_cdf(radii[i] + oracle::kDiscreteSupShift * std::sqrt(dt));
    CAPTURE(radii[i]);
    CHECK(std::abs(t.p_hat[i] - shifted) <= 4.0 * t.std_error[i] + 0.003);
    CHECK(t.p_hat[i] >= oracle::brownian_sup_cdf(radii[i]));
  }
}

TEST_CASE("b function basics") {
  const auto t = make_table({0.5, 1.0, 2.0}, {std::exp(-2.0), 0.5, 1.0}, 1000);
  const auto b = b_function(t);
  CHECK(b(0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b(2.0) == 0.0);
  CHECK(b(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(code_of([&] { b(0.4); }) == ErrorCode::OutOfTableRange);
  CHECK(b(2.5) == 0.0);
  const auto open = b_function(make_table({0.5, 1.0}, {0.1, 0.2}, 1000));
  CHECK(code_of([&] { open(1.5); }) == ErrorCode::OutOfTableRange);

  const auto empty = make_table({0.1, 0.2}, {0.0, 0.0}, 1000);
  CHECK(code_of([&] { b_function(empty); }) == ErrorCode::NoUsableEntries);
}

TEST_CASE("inversion of a synthetic inverse-square table") {
  const auto t = inverse_square_table(linspace(0.3, 1.5, 25));
  CHECK(invert_b(t, 4.0) == doctest::Approx(0.5).epsilon(1e-9));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double R = -std::log(t.p_hat[i]);
    CHECK(invert_b(t, R) == t.radii[i]);
  }
  const auto b = b_function(t);
  for (double R : {1.0, 2.5, 7.3}) CHECK(std::abs(b(invert_b(t, R)) - R) <= 1e-9);
  CHECK(code_of([&] { invert_b(t, 100.0); }) == ErrorCode::OutOfTableRange);
  CHECK(code_of([&] { invert_b(t, 0.1); }) == ErrorCode::OutOfTableRange);
}

TEST_CASE("b function then inversion recovers interior radii") {
  const auto t = inverse_square_table(logspace(0.2, 1.4, 40));
  const auto b = b_function(t);
  for (double s : linspace(0.21, 1.39, 97)) {
    const double R = 1.0 / (s * s);
    CHECK(std::abs(invert_b(t, R) - s) <= 1e-6);
    CHECK(std::abs(b(s) - R) <= 1e-6 * R);
  }
}

TEST_CASE("asymptotic inverse examples") {
  CHECK(invert_asymptotic({1, 2, 0, {}}, 100.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(invert_asymptotic({2, 1, 0, {}}, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(invert_asymptotic({1, 2, 2, {}}, std::exp(2.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(code_of([] { invert_asymptotic({1, 2, 1, {}}, 1.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { invert_asymptotic({1, 2, 0, {}}, 0.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { validate_law({0, 2, 0, {}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { validate_law({1, -1, 0, {}}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("asymptotic inverse is a large-rate inverse of the law") {
  const AsymptoticLaw law{1, 2, 2, {}};
  // |b(s_R)/R - 1| from the closed form (log(1/s_R) / (log(R)/2))^2,
  // s_R = log(R) / (2 sqrt R); the log-log correction decays slowly.
  const auto gap = [](double R) {
    const double s = std::log(R) / (2.0 * std::sqrt(R));
    return std::abs(std::pow(std::log(1.0 / s) / (0.5 * std::log(R)), 2.0) - 1.0);
  };
  CHECK(gap(1e4) == doctest::Approx(0.5532719749067609).epsilon(1e-12));
  double prev = std::numeric_limits<double>::infinity();
  for (double R : {1e2, 1e3, 1e4, 1e10, 1e100, 1e300}) {
    const double got = std::abs(law_value(law, invert_asymptotic(law, R)) / R - 1.0);
    CAPTURE(R);
    CHECK(got == doctest::Approx(gap(R)).epsilon(1e-9));
    CHECK(got < prev);
    prev = got;
  }
  CHECK(prev <= 0.05);
}

TEST_CASE("three-parameter fit on exact synthetic data") {
  const AsymptoticLaw truth{2, 2, 1, {}};
  const auto s = linspace(0.05, 0.3, 12);
  std::vector<double> b, w(s.size(), 1.0);
  for (double x : s) b.push_back(law_value(truth, x));
  const auto fit = fit_asymptotic(s, b, w);
  CHECK(fit.law.c == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fit.law.a == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(fit.law.b - 1.0) <= 1e-6);
  CHECK(fit.rows == 12);
  CHECK_FALSE(fit.forced_b);
  CHECK(fit.condition_number > 1.0);
  CHECK(fit.condition_number < 1e8);
}

TEST_CASE("forced-b fit on an exact power law") {
  const AsymptoticLaw truth{0.7, 1.6, 0, {}};
  const auto s = logspace(0.01, 0.9, 20);
  std::vector<double> b, w;
  for (std::size_t i = 0; i < s.size(); ++i) {
    b.push_back(law_value(truth, s[i]));
    w.push_back(1.0 + i);
  }
  const auto fit = fit_asymptotic(s, b, w, 0.0);
  CHECK(std::abs(fit.law.a - 1.6) <= 1e-10);
  CHECK(fit.law.c == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(fit.law.b == 0.0);
  CHECK(fit.forced_b);
  CHECK(fit.std_error[2] == 0.0);
}

TEST_CASE("fit preconditions") {
  const std::vector<double> s{0.1, 0.2, 0.3, 0.4}, b{10, 5, 3, 2}, w{1, 1, 1, 1};
  CHECK(code_of([&] { fit_asymptotic(s, b, w); }) == ErrorCode::InsufficientData);
  const std::vector<double> s5{0.1, 0.2, 0.3, 0.4, 1.5}, b5{10, 5, 3, 2, 1}, w5{1, 1, 1, 1, 1};
  CHECK(code_of([&] { fit_asymptotic(s5, b5, w5, 0.0); }) == ErrorCode::DomainError);
  // Nearly collinear regressors on a very narrow window.
  const auto narrow = linspace(0.2, 0.2 + 1e-7, 6);
  std::vector<double> bn, wn(6, 1.0);
  for (double x : narrow) bn.push_back(law_value({1, 2, 1, {}}, x));
  CHECK(code_of([&] { fit_asymptotic(narrow, bn, wn); }) == ErrorCode::IllConditionedFit);
}

TEST_CASE("table fit uses the window and resolvable rows") {
  const auto radii = logspace(0.2, 0.9, 30);
  std::vector<double> p;
  for (double s : radii) p.push_back(std::exp(-law_value({1.3, 2, 0, {}}, s)));
  const auto t = make_table(radii, p, 10000000);
  const auto fit = fit_asymptotic(t, {0.25, 0.6}, 0.0);
  CHECK(fit.law.a == doctest::Approx(2.0).epsilon(1e-9));
  std::size_t expected = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    expected += t.radii[i] >= 0.25 && t.radii[i] <= 0.6 && std::llround(t.p_hat[i] * t.n_samples) >= 30;
  CHECK(fit.rows == expected);
  CHECK(fit.rows >= 5);
}

TEST_CASE("ratio condition on power laws") {
  const auto rep = ratio_condition({1, 2, 0, {}}, {0.1, 0.6}, 0.5, 32);
  CHECK(rep.holds());
  CHECK(rep.ratio.size() == 32);
  for (double q : rep.ratio) {
    CHECK(q > 0.0);
    CHECK(q < 1.0);
  }
  CHECK(code_of([] { ratio_condition({1, 2, 0, {}}, {0.1, 1.2}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ratio_condition({1, 2, 0, {}}, {0.1, 0.5}, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("csv format and round trip") {
  const auto t = make_table({0.1, 0.5, 1.0 / 3.0 * 2.0, 50.0}, {0.0, 0.25, 0.5, 1.0}, 1000);
  std::ostringstream os;
  write_small_ball_csv(os, t);
  const std::string text = os.str();
  CHECK(text.rfind("s,n_samples,p_hat,stderr,b_hat\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("0.10000000000000001,1000,0,0,\n") != std::string::npos);
  CHECK(text.find("0.66666666666666663,") != std::string::npos);
  CHECK(text.find(",0\n") != std::string::npos);

  std::istringstream is(text);
  const auto back = read_small_ball_csv(is);
  CHECK(back.radii == t.radii);
  CHECK(back.p_hat == t.p_hat);
  CHECK(back.std_error == t.std_error);
  CHECK(back.n_samples == 1000);
}
