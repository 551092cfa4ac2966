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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qgauss/entropy.hpp"
#include "qgauss/path_norms.hpp"
#include "qgauss/sampling.hpp"

namespace qgauss {

struct OracleReport {
  std::string lemma;
  std::int64_t trials = 0;
  double min_deficit = 0.0;
  double tolerance = 1e-9;
  bool pass = false;
};

/// Standard normal restricted to an odd, symmetric lattice on [-L, L].
class DiscreteGaussian1D {
 public:
  DiscreteGaussian1D(int atoms, double half_width);

  std::span<const double> atoms() const noexcept { return x_; }
  std::span<const double> masses() const noexcept { return m_; }
  std::size_t size() const noexcept { return x_.size(); }
  double spacing() const noexcept { return x_[1] - x_[0]; }

  /// Mass of atoms in the closed interval [lo, hi].
  double interval_mass(double lo, double hi) const;

 private:
  std::vector<double> x_, m_;
};

/// Integral of rho(|x|) over the centered ball holding exactly `mass`,
/// filling the boundary atoms fractionally.
double centered_ball_integral(const DiscreteGaussian1D& mu, double mass, const Distortion& rho);

/// sum_{i in A} rho(|x_i - a|) mu_i minus the centered-ball integral at the
/// same mass.
double rearrangement_deficit(const DiscreteGaussian1D& mu, std::span<const std::size_t> subset, double center,
                             const Distortion& rho);

/// Random (A, a) pairs: alternating greedy mass-matched random subsets and
/// contiguous intervals, each with an atom as center.
OracleReport oracle_ball_rearrangement(const DiscreteGaussian1D& mu, double target_mass, const Distortion& rho,
                                       std::int64_t n_trials, std::uint64_t seed, unsigned threads = 1,
                                       double tolerance = 1e-9);

enum class ExtremePointMode {
  Normalized,  // sum x_i = 1, x_i in [0, x0], sum x_i^alpha >= x0^alpha
  Relaxed,     // the same without sum x_i = 1
};

/// min over candidates of sum f(x_i) - f(x0). Normalized mode throws
/// InfeasibleConstraints when x0 * n_max < 1.
OracleReport oracle_extreme_point(const std::function<double(double)>& f, double alpha, double x0, int n_max,
                                  std::int64_t n_trials, std::uint64_t seed,
                                  ExtremePointMode mode = ExtremePointMode::Normalized, unsigned threads = 1,
                                  double tolerance = 1e-9);

/// f(x) = x (log 1/x)^{-A} (log log 1/x)^B with f(0) = 0.
struct LemmaFunctionParams {
  double A = 1.0;
  double B = 0.0;
  double alpha = 2.0;
  double x0 = 0.01;
};

void validate_params(const LemmaFunctionParams& params);
double lemma_function(const LemmaFunctionParams& params, double x);

struct MonotoneFReport {
  double x_star = 0.0;
  bool f_increasing = true;
  std::vector<double> f_violations;  // probes where f failed to increase
  std::vector<double> F_violations;  // probes where F = x^{1-alpha} f' increased
  std::vector<double> probes;
  std::vector<double> F;
};

/// Log-spaced probes in ]lo, hi[.
std::vector<double> log_probe_grid(double lo, double hi, int count);

/// Numerically differentiates f; x_star is the last probe of the longest
/// prefix on which F decreases.
MonotoneFReport check_monotone_F(const LemmaFunctionParams& params, std::span<const double> probes);

struct Quantizer {
  RowMatrixXd codebook;  // row 0 is the center
  std::vector<std::size_t> assignment;

  std::vector<double> cell_masses() const;
};

double empirical_entropy(const Quantizer& q, EntropyOrder alpha);

struct BallNetResult {
  Quantizer quantizer;
  double distortion = 0.0;
  double center_mass = 0.0;
  std::vector<double> entropies;  // one per requested order
};

/// Center cell B(0, s) around the zero path plus a greedy first-fit
/// delta-net over the remaining paths.
BallNetResult build_ball_net_quantizer(const PathEnsemble& ensemble, const NormSpec& norm, double s, double delta,
                                       const Distortion& rho, std::span<const EntropyOrder> orders = {});

}  // namespace qgauss
