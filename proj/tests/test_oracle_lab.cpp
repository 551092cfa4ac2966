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
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "qgauss/errors.hpp"
#include "qgauss/oracle_lab.hpp"

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

const double kEE = std::exp(-std::exp(1.0));

double sup_distance(const RowMatrixXd& m, Eigen::Index i, const RowMatrixXd& other, Eigen::Index j) {
  return (m.row(i) - other.row(j)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("discrete gaussian lattice") {
  const DiscreteGaussian1D mu(401, 6.0);
  CHECK(mu.size() == 401);
  CHECK(mu.atoms()[200] == 0.0);
  CHECK(mu.spacing() == doctest::Approx(0.03));
  double total = 0.0;
  for (double m : mu.masses()) total += m;
  CHECK(std::abs(total - 1.0) <= 1e-12);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CHECK(mu.atoms()[i] == -mu.atoms()[mu.size() - 1 - i]);
    CHECK(mu.masses()[i] == mu.masses()[mu.size() - 1 - i]);
  }
  CHECK(mu.interval_mass(-100, 100) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mu.interval_mass(0.0, 0.0) == mu.masses()[200]);
  CHECK(code_of([] { DiscreteGaussian1D(400, 6.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { DiscreteGaussian1D(11, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("centered intervals dominate their shifts") {
  const DiscreteGaussian1D mu(801, 8.0);
  for (double w : {0.3, 1.0, 2.5}) {
    const double centered = mu.interval_mass(-w, w);
    for (double a : {0.01, 0.5, 1.7, -2.2, 5.0}) CHECK(mu.interval_mass(-w + a, w + a) <= centered + 1e-12);
  }
}

TEST_CASE("rearrangement equality and tail cases") {
  const DiscreteGaussian1D mu(1001, 8.0);
  const Distortion r2(2.0);
  std::vector<std::size_t> ball;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (std::abs(mu.atoms()[i]) <= 0.8 + 1e-12) ball.push_back(i);
  CHECK(std::abs(rearrangement_deficit(mu, ball, 0.0, r2)) <= 1e-14);

  // Right tail holding about 0.3 of the mass, centered at its mean.
  std::vector<std::size_t> tail;
  double mass = 0.0, first = 0.0;
  for (std::size_t i = mu.size(); i-- > 0 && mass < 0.3;) {
    tail.push_back(i);
    mass += mu.masses()[i];
    first += mu.masses()[i] * mu.atoms()[i];
  }
  const double centroid = first / mass;
  double direct = 0.0;
  for (std::size_t i : tail) direct += mu.masses()[i] * std::pow(mu.atoms()[i] - centroid, 2.0);
  const double d = rearrangement_deficit(mu, tail, centroid, r2);
  CHECK(d > 0.0);
  CHECK(d == doctest::Approx(direct - centered_ball_integral(mu, mass, r2)).epsilon(1e-12));
}

TEST_CASE("centered ball integral") {
  const DiscreteGaussian1D mu(101, 5.0);
  CHECK(centered_ball_integral(mu, 0.0, Distortion(1.0)) == 0.0);
  double full = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) full += mu.masses()[i] * mu.atoms()[i] * mu.atoms()[i];
  CHECK(centered_ball_integral(mu, 1.0, Distortion(2.0)) == doctest::Approx(full).epsilon(1e-12));
  double prev = 0.0;
  for (double m = 0.05; m < 1.0; m += 0.05) {
    const double v = centered_ball_integral(mu, m, Distortion(1.0));
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(code_of([&] { centered_ball_integral(mu, 1.5, Distortion(1.0)); }) == ErrorCode::MassUnreachable);
}

TEST_CASE("rearrangement oracle over random pairs") {
  const DiscreteGaussian1D mu(1001, 8.0);
  const auto rep = oracle_ball_rearrangement(mu, 0.3, Distortion(2.0), 2000, 17);
  CHECK(rep.pass);
  CHECK(rep.trials == 2000);
  CHECK(rep.min_deficit >= -1e-9);
  CHECK(rep.lemma == "rearrangement");
  const auto par = oracle_ball_rearrangement(mu, 0.3, Distortion(2.0), 2000, 17, 3);
  CHECK(par.min_deficit == rep.min_deficit);
  CHECK(code_of([&] { oracle_ball_rearrangement(mu, 1.0, Distortion(2.0), 10, 1); }) == ErrorCode::MassUnreachable);
}

TEST_CASE("extreme point oracle") {
  const auto square = [](double x) { return x * x; };
  const auto one = oracle_extreme_point(square, 2.0, 1.0, 1, 10, 3);
  CHECK(one.min_deficit == 0.0);
  CHECK(one.pass);

  const auto rep = oracle_extreme_point(square, 3.0, 0.6, 5, 20000, 4);
  CHECK(rep.pass);
  CHECK(rep.min_deficit >= -1e-12);
  const auto par = oracle_extreme_point(square, 3.0, 0.6, 5, 20000, 4, ExtremePointMode::Normalized, 3);
  CHECK(par.min_deficit == rep.min_deficit);

  const LemmaFunctionParams p{1.0, 0.0, 2.0, 0.1};
  const auto f = [&](double x) { return lemma_function(p, x); };
  CHECK(code_of([&] { oracle_extreme_point(f, 2.0, 0.1, 6, 10, 1); }) == ErrorCode::InfeasibleConstraints);
  CHECK(oracle_extreme_point(f, 2.0, 0.1, 10, 5000, 5).min_deficit >= -1e-12);
  CHECK(oracle_extreme_point(f, 2.0, 0.1, 6, 5000, 5, ExtremePointMode::Relaxed).min_deficit >= -1e-12);
}

TEST_CASE("lemma function and F monotonicity") {
  const LemmaFunctionParams p{1.0, 0.0, 2.0, 0.01};
  CHECK(lemma_function(p, 0.0) == 0.0);
  CHECK(lemma_function(p, 0.1) == doctest::Approx(0.1 / std::log(10.0)));
  CHECK(code_of([&] { lemma_function(p, 0.5); }) == ErrorCode::DomainError);
  CHECK(code_of([] { validate_params({1.0, 0.0, 2.0, 0.5}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { validate_params({0.0, 0.0, 2.0, 0.1}); }) == ErrorCode::InvalidArgument);

  const auto probes = log_probe_grid(1e-9, kEE, 10000);
  CHECK(probes.size() == 10000);
  CHECK(probes.front() > 1e-9);
  CHECK(probes.back() < kEE);
  const auto rep = check_monotone_F(p, probes);
  CHECK(rep.f_increasing);
  CHECK(rep.f_violations.empty());
  for (double x : {1e-6, 1e-3, 0.05}) CHECK(lemma_function(p, x / 2) < lemma_function(p, x));

  for (std::size_t k : {std::size_t{10}, std::size_t{5000}, std::size_t{9990}}) {
    const double x = probes[k];
    CHECK(rep.F[k] == doctest::Approx(std::pow(x, -1.0) * oracle::lemma_derivative(1.0, 0.0, x)).epsilon(1e-6));
  }

  const auto other = check_monotone_F({2.0, 1.0, 1.5, 0.01}, log_probe_grid(1e-9, kEE, 2000));
  CHECK(other.x_star > 0.0);
  for (std::size_t k = 1; k < other.probes.size() && other.probes[k] <= other.x_star; ++k)
    CHECK(other.F[k] <= other.F[k - 1]);
}

TEST_CASE("empirical entropy of simple quantizers") {
  Quantizer single{RowMatrixXd::Zero(1, 2), {0, 0, 0}};
  CHECK(empirical_entropy(single, EntropyOrder(2.0)) == 0.0);
  Quantizer two{RowMatrixXd::Zero(2, 2), {0, 1, 0, 1}};
  CHECK(empirical_entropy(two, EntropyOrder::infinity()) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  Quantizer three{RowMatrixXd::Zero(3, 1), {0, 0, 1, 2}};
  CHECK(empirical_entropy(three, EntropyOrder(2.0)) == doctest::Approx(std::log(8.0 / 3.0)).epsilon(1e-15));
  Quantizer empty{RowMatrixXd::Zero(1, 1), {}};
  CHECK(code_of([&] { empirical_entropy(empty, EntropyOrder(2.0)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("ball plus net quantizer structure") {
  const CovarianceKernel bm = FractionalBrownianSheet{{0.5}};
  const auto ens = sample_paths(bm, make_grid(1, 33), 600, 8);
  const auto sup = NormSpec::sup();
  const Distortion r2(2.0);
  const std::vector<EntropyOrder> orders{EntropyOrder(2.0), EntropyOrder(3.0), EntropyOrder::infinity()};

  const double s = 0.9, delta = 0.7;
  const auto res = build_ball_net_quantizer(ens, sup, s, delta, r2, orders);
  const auto& q = res.quantizer;
  CHECK(q.codebook.row(0).isZero());
  CHECK(q.assignment.size() == 600);
  for (Eigen::Index a = 1; a < q.codebook.rows(); ++a) {
    CHECK(q.codebook.row(a).cwiseAbs().maxCoeff() > s);
    for (Eigen::Index b = a + 1; b < q.codebook.rows(); ++b) CHECK(sup_distance(q.codebook, a, q.codebook, b) > delta);
  }
  double distortion = 0.0;
  for (std::size_t i = 0; i < q.assignment.size(); ++i) {
    const double d = sup_distance(ens.paths, static_cast<Eigen::Index>(i), q.codebook,
                                  static_cast<Eigen::Index>(q.assignment[i]));
    CHECK(d <= (q.assignment[i] == 0 ? s : delta));
    distortion += d * d;
  }
  CHECK(res.distortion == doctest::Approx(distortion / 600).epsilon(1e-12));

  const auto masses = q.cell_masses();
  CHECK(res.center_mass == masses[0]);
  for (std::size_t k = 0; k < 2; ++k) {
    const double alpha = orders[k].value();
    CHECK(res.entropies[k] == empirical_entropy(q, orders[k]));
    for (double p0 : masses)
      if (p0 > 0.0) CHECK(res.entropies[k] <= alpha / (alpha - 1.0) * -std::log(p0) + 1e-12);
  }
}

TEST_CASE("ball plus net quantizer limits") {
  const CovarianceKernel bm = FractionalBrownianSheet{{0.5}};
  const auto ens = sample_paths(bm, make_grid(1, 17), 200, 4);
  const Distortion r2(2.0);
  const std::vector<EntropyOrder> orders{EntropyOrder::infinity()};

  const auto coarse = build_ball_net_quantizer(ens, NormSpec::sup(), 0.5, 100.0, r2, orders);
  CHECK(coarse.quantizer.codebook.rows() == 2);
  CHECK(coarse.entropies[0] <= std::log(2.0) + 1e-15);

  const auto all_in = build_ball_net_quantizer(ens, NormSpec::sup(), 100.0, 0.1, r2);
  CHECK(all_in.quantizer.codebook.rows() == 1);
  CHECK(all_in.center_mass == 1.0);

  const double s = 1.2;
  const auto mid = build_ball_net_quantizer(ens, NormSpec::sup(), s, 1e-3, r2);
  double inside = 0.0;
  for (std::size_t i = 0; i < mid.quantizer.assignment.size(); ++i)
    if (mid.quantizer.assignment[i] == 0) inside += std::pow(ens.paths.row(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff(), 2.0);
  CHECK(inside / 200 <= s * s * mid.center_mass + 1e-12);

  PathEnsemble one = ens;
  one.paths = ens.paths.topRows(1);
  CHECK(code_of([&] { build_ball_net_quantizer(one, NormSpec::sup(), 1.0, 1.0, r2); }) ==
        ErrorCode::DegenerateEnsemble);
}
