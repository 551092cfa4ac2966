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

#include <cmath>

#include "qgauss/errors.hpp"
#include "qgauss/path_norms.hpp"
#include "qgauss/rng.hpp"

using namespace qgauss;

TEST_CASE("norm examples") {
  const auto g = make_grid(1, 33);
  CHECK(path_norm(Eigen::VectorXd::Constant(33, 2.0), g, NormSpec::sup()) == 2.0);
  CHECK(path_norm(Eigen::VectorXd::Constant(33, 3.0), g, NormSpec::lp(2.0)) == doctest::Approx(3.0).epsilon(1e-15));
  const auto g2 = make_grid(1, 1025);
  Eigen::VectorXd t(1025);
  for (int i = 0; i < 1025; ++i) t(i) = g2.coordinate(i);
  CHECK(std::abs(path_norm(t, g2, NormSpec::lp(1.0)) - 0.5) <= 1e-5);
  CHECK(path_norm(Eigen::VectorXd::Constant(1, -4.0), make_grid(1, 1), NormSpec::lp(3.0)) ==
        doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("trapezoid weights integrate to one") {
  for (int d : {1, 2, 3})
    for (int n : {1, 2, 5, 16}) {
      const NormEvaluator e(make_grid(d, n), NormSpec::lp(2.0));
      CHECK(e.weights().sum() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("length mismatch is rejected") {
  try {
    path_norm(Eigen::VectorXd::Zero(5), make_grid(1, 6), NormSpec::sup());
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  CHECK_THROWS_AS(validate_norm(NormSpec::lp(0.5)), Error);
}

TEST_CASE("distortion examples and shape") {
  CHECK(distortion_value(0.0, Distortion(2.0)) == 0.0);
  CHECK(distortion_value(2.0, Distortion(2.0)) == 4.0);
  CHECK(distortion_value(4.0, Distortion(0.5)) == 2.0);
  CHECK_THROWS_AS(Distortion(0.0), Error);
  CHECK_THROWS_AS(distortion_value(-1.0, Distortion(1.0)), Error);
  for (double r : {0.3, 1.0, 2.0, 3.7}) {
    const Distortion rho(r);
    double prev = distortion_value(0.0, rho);
    for (int i = 1; i <= 1000; ++i) {
      const double v = distortion_value(i * 1e-3, rho);
      CHECK(v > prev);
      CHECK(v - prev <= std::pow(1e-3, std::min(r, 1.0)) * std::max(1.0, r) + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("sup dominates Lp and Lp grows with p") {
  const auto g = make_grid(2, 21);
  const NormEvaluator sup(g, NormSpec::sup());
  CounterRng rng(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const double fx = 1 + 3 * rng.next_uniform(), fy = 1 + 3 * rng.next_uniform(), ph = 6 * rng.next_uniform();
    Eigen::VectorXd f(static_cast<Eigen::Index>(g.size()));
    double pt[2];
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.point(i, pt);
      f(static_cast<Eigen::Index>(i)) = std::sin(fx * pt[0] + ph) * std::cos(fy * pt[1]) + 0.2;
    }
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 8.0}) {
      const double v = NormEvaluator(g, NormSpec::lp(p))(f);
      CHECK(v <= sup(f) + 1e-12);
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("within agrees with the norm of the difference") {
  const auto g = make_grid(1, 50);
  CounterRng rng(8, 1);
  for (const NormSpec& ns : {NormSpec::sup(), NormSpec::lp(2.0), NormSpec::lp(1.0), NormSpec::lp(3.0)}) {
    const NormEvaluator e(g, ns);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd x(50), y(50);
      for (int i = 0; i < 50; ++i) {
        x(i) = rng.next_uniform();
        y(i) = rng.next_uniform();
      }
      const double d = e(x - y);
      CHECK(e.within(x, y, d * (1 + 1e-9)));
      CHECK_FALSE(e.within(x, y, d * (1 - 1e-9)));
    }
  }
}
