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

#include "qgauss/oracle_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qgauss/errors.hpp"
#include "qgauss/numerics.hpp"
#include "qgauss/parallel.hpp"
#include "qgauss/rng.hpp"

namespace qgauss {
namespace {

double min_of(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v)
    if (!std::isnan(x)) m = std::min(m, x);
  return m;
}

OracleReport finish(std::string lemma, const std::vector<double>& deficits, double tolerance) {
  OracleReport rep;
  rep.lemma = std::move(lemma);
  rep.tolerance = tolerance;
  rep.trials = std::count_if(deficits.begin(), deficits.end(), [](double d) { return !std::isnan(d); });
  rep.min_deficit = min_of(deficits);
  rep.pass = rep.trials > 0 && rep.min_deficit >= -tolerance;
  return rep;
}

// Flat Dirichlet(1, ..., 1) sample of length n.
void dirichlet(CounterRng& rng, std::vector<double>& w) {
  double total = 0.0;
  for (double& v : w) total += (v = -std::log(rng.next_uniform()));
  for (double& v : w) v /= total;
}

double uniform_in(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * (1.0 - rng.next_uniform()); }

int int_in(CounterRng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

}  // namespace

DiscreteGaussian1D::DiscreteGaussian1D(int atoms, double half_width) {
  require(atoms >= 3 && atoms % 2 == 1, ErrorCode::InvalidArgument, "atom count must be odd and at least 3");
  require(std::isfinite(half_width) && half_width > 0.0, ErrorCode::InvalidArgument, "half width must be positive");
  const auto n = static_cast<std::size_t>(atoms);
  const std::size_t mid = n / 2;
  x_.assign(n, 0.0);
  m_.assign(n, 0.0);
  for (std::size_t k = 0; k < mid; ++k) {
    const double x = half_width * static_cast<double>(mid - k) / static_cast<double>(mid);
    x_[k] = -x;
    x_[n - 1 - k] = x;
  }
  NeumaierSum total;
  for (std::size_t k = 0; k < n; ++k) total += normal_pdf(x_[k]);
  for (std::size_t k = 0; k < n; ++k) m_[k] = normal_pdf(x_[k]) / total.value();
}

double DiscreteGaussian1D::interval_mass(double lo, double hi) const {
  NeumaierSum acc;
  for (std::size_t k = 0; k < x_.size(); ++k)
    if (x_[k] >= lo && x_[k] <= hi) acc += m_[k];
  return acc.value();
}

double centered_ball_integral(const DiscreteGaussian1D& mu, double mass, const Distortion& rho) {
  require(mass >= 0.0 && mass <= 1.0 + 1e-12, ErrorCode::MassUnreachable, "ball mass must lie in [0, 1]");
  const auto x = mu.atoms();
  const auto m = mu.masses();
  const std::size_t mid = mu.size() / 2;
  double remaining = mass;
  NeumaierSum acc;
  for (std::size_t j = 0; j <= mid && remaining > 0.0; ++j) {
    const double shell = j == 0 ? m[mid] : m[mid - j] + m[mid + j];
    const double take = std::min(shell, remaining);
    acc += take * distortion_value(std::abs(x[mid + j]), rho);
    remaining -= take;
  }
  return acc.value();
}

double rearrangement_deficit(const DiscreteGaussian1D& mu, std::span<const std::size_t> subset, double center,
                             const Distortion& rho) {
  const auto x = mu.atoms();
  const auto m = mu.masses();
  NeumaierSum mass, integral;
  for (std::size_t i : subset) {
    require(i < mu.size(), ErrorCode::InvalidArgument, "subset index out of range");
    mass += m[i];
    integral += m[i] * distortion_value(std::abs(x[i] - center), rho);
  }
  return integral.value() - centered_ball_integral(mu, std::min(1.0, mass.value()), rho);
}

OracleReport oracle_ball_rearrangement(const DiscreteGaussian1D& mu, double target_mass, const Distortion& rho,
                                       std::int64_t n_trials, std::uint64_t seed, unsigned threads,
                                       double tolerance) {
  require(target_mass > 0.0 && target_mass < 1.0, ErrorCode::MassUnreachable, "target mass must lie in ]0, 1[");
  require(n_trials >= 1, ErrorCode::InvalidArgument, "need at least one trial");
  const auto m = mu.masses();
  const std::size_t n = mu.size(), mid = n / 2;
  const double max_atom = *std::max_element(m.begin(), m.end());

  // Last start index from which a rightward interval can still reach the target.
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + m[k];
  std::size_t last_start = 0;
  while (last_start + 1 < n && suffix[last_start + 1] >= target_mass) ++last_start;

  std::vector<double> deficits(static_cast<std::size_t>(n_trials));
  parallel_for(deficits.size(), threads, [&](std::size_t t) {
    CounterRng rng(seed, t);
    std::vector<std::size_t> subset;
    double total = 0.0;
    switch (t % 4) {
      case 0:
      case 2: {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.next_below(i + 1)]);
        for (std::size_t i : perm) {
          if (total + m[i] <= target_mass) {
            subset.push_back(i);
            total += m[i];
          }
        }
        require(target_mass - total <= max_atom, ErrorCode::MassUnreachable, "greedy fill missed the target mass");
        break;
      }
      case 1: {
        std::size_t i = static_cast<std::size_t>(rng.next_below(last_start + 1));
        for (; i < n && total < target_mass; ++i) {
          subset.push_back(i);
          total += m[i];
        }
        break;
      }
      default: {
        subset.push_back(mid);
        total = m[mid];
        for (std::size_t j = 1; j <= mid && total < target_mass; ++j) {
          subset.push_back(mid - j);
          subset.push_back(mid + j);
          total += m[mid - j] + m[mid + j];
        }
        break;
      }
    }
    std::size_t c;
    if (t % 4 == 3) {
      const int off = int_in(rng, -10, 10);
      c = static_cast<std::size_t>(static_cast<long long>(mid) + off);
    } else {
      c = subset[rng.next_below(subset.size())];
    }
    deficits[t] = rearrangement_deficit(mu, subset, mu.atoms()[c], rho);
  });
  return finish("rearrangement", deficits, tolerance);
}

namespace {

// Clips entries at `cap` and hands the excess to the unclipped entries in
// proportion to their size, keeping the total. Needs size() * cap >= total.
void cap_preserving_sum(std::vector<double>& x, double cap) {
  for (std::size_t round = 0; round < x.size(); ++round) {
    double excess = 0.0, free_mass = 0.0;
    for (double& v : x) {
      if (v >= cap) {
        excess += v - cap;
        v = cap;
      } else {
        free_mass += v;
      }
    }
    if (excess <= 0.0) return;
    if (free_mass <= 0.0) {
      std::size_t open = 0;
      for (double v : x) open += v < cap;
      if (open == 0) return;
      for (double& v : x)
        if (v < cap) v = excess / static_cast<double>(open);
      continue;
    }
    const double grow = 1.0 + excess / free_mass;
    for (double& v : x)
      if (v < cap) v *= grow;
  }
}

}  // namespace

OracleReport oracle_extreme_point(const std::function<double(double)>& f, double alpha, double x0, int n_max,
                                  std::int64_t n_trials, std::uint64_t seed, ExtremePointMode mode,
                                  unsigned threads, double tolerance) {
  require(alpha > 1.0 && std::isfinite(alpha), ErrorCode::InvalidArgument, "alpha must exceed 1");
  require(x0 > 0.0 && x0 <= 1.0, ErrorCode::InvalidArgument, "x0 must lie in ]0, 1]");
  require(n_max >= 1, ErrorCode::InvalidArgument, "n_max must be positive");
  require(n_trials >= 1, ErrorCode::InvalidArgument, "need at least one trial");
  const bool normalized = mode == ExtremePointMode::Normalized;
  int n_min = 1;
  if (normalized) {
    require(x0 * n_max >= 1.0 - 1e-12, ErrorCode::InfeasibleConstraints,
            "sum x_i = 1 with x_i <= x0 needs n_max >= 1/x0 = " + std::to_string(1.0 / x0));
    n_min = std::max(1, static_cast<int>(std::ceil(1.0 / x0 - 1e-12)));
  }
  const double f0 = f(x0);
  const double budget = std::pow(x0, alpha);

  auto feasible = [&](const std::vector<double>& x) {
    double sa = 0.0;
    for (double v : x) {
      if (v < 0.0 || v > x0 * (1.0 + 1e-15)) return false;
      sa += std::pow(v, alpha);
    }
    return sa >= budget * (1.0 - 1e-12);
  };

  std::vector<double> deficits(static_cast<std::size_t>(n_trials), std::numeric_limits<double>::quiet_NaN());
  parallel_for(deficits.size(), threads, [&](std::size_t t) {
    CounterRng rng(seed, t);
    std::vector<double> x;
    for (int attempt = 0; attempt < 256; ++attempt) {
      const int n = int_in(rng, n_min, n_max);
      x.assign(static_cast<std::size_t>(n), 0.0);
      if (t % 2 == 0) {
        std::vector<double> w(x.size());
        dirichlet(rng, w);
        if (normalized) {
          x = w;
          cap_preserving_sum(x, x0);
        } else {
          const double wmax = *std::max_element(w.begin(), w.end());
          const double scale = rng.next_below(2) == 0 ? 1.0 : uniform_in(rng, 1.0, 1.0 / wmax);
          for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::min(x0, x0 * std::pow(w[i] * scale, 1.0 / alpha));
        }
      } else {
        // Extreme-point structure: k coordinates pinned at x0.
        const int k_cap = normalized ? std::min(n, static_cast<int>(std::floor(1.0 / x0 + 1e-12))) : n;
        const int k = int_in(rng, 0, k_cap);
        for (int i = 0; i < k; ++i) x[static_cast<std::size_t>(i)] = x0;
        const int rest = n - k;
        if (rest > 0) {
          if (normalized) {
            const double left = std::max(0.0, 1.0 - k * x0);
            if (rng.next_below(2) == 0) {
              for (int i = k; i < n; ++i) x[static_cast<std::size_t>(i)] = left / rest;
            } else {
              std::vector<double> w(static_cast<std::size_t>(rest));
              dirichlet(rng, w);
              for (double& v : w) v *= left;
              cap_preserving_sum(w, x0);
              std::copy(w.begin(), w.end(), x.begin() + k);
            }
          } else if (k == 0) {
            for (double& v : x) v = x0 * std::pow(1.0 / n, 1.0 / alpha);
          } else {
            for (int i = k; i < n; ++i) x[static_cast<std::size_t>(i)] = x0 * (1.0 - rng.next_uniform());
          }
        }
      }
      if (!feasible(x)) continue;
      NeumaierSum acc;
      for (double v : x) acc += f(v);
      deficits[t] = acc.value() - f0;
      return;
    }
  });
  return finish(normalized ? "extreme-point" : "extreme-point-relaxed", deficits, tolerance);
}

void validate_params(const LemmaFunctionParams& p) {
  require(std::isfinite(p.A) && p.A > 0.0, ErrorCode::InvalidArgument, "A must be positive");
  require(std::isfinite(p.B) && p.B >= 0.0, ErrorCode::InvalidArgument, "B must be nonnegative");
  require(std::isfinite(p.alpha) && p.alpha > 1.0, ErrorCode::InvalidArgument, "alpha must exceed 1");
  require(p.x0 > 0.0 && p.x0 < std::exp(-1.0), ErrorCode::InvalidArgument, "x0 must lie in ]0, 1/e[");
}

double lemma_function(const LemmaFunctionParams& p, double x) {
  if (x == 0.0) return 0.0;
  require(x > 0.0 && x < std::exp(-1.0), ErrorCode::DomainError, "lemma function needs 0 <= x < 1/e");
  const double l = std::log(1.0 / x);
  const double v = x * std::pow(l, -p.A);
  return p.B == 0.0 ? v : v * std::pow(std::log(l), p.B);
}

std::vector<double> log_probe_grid(double lo, double hi, int count) {
  require(lo > 0.0 && hi > lo && count >= 2, ErrorCode::InvalidArgument, "probe grid needs 0 < lo < hi, count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double a = std::log(lo), b = std::log(hi);
  // Interior points only: the grid lives in the open interval ]lo, hi[.
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * (i + 1) / (count + 1));
  return g;
}

MonotoneFReport check_monotone_F(const LemmaFunctionParams& params, std::span<const double> probes) {
  require(std::isfinite(params.A) && params.A > 0.0 && params.B >= 0.0 && params.alpha > 1.0,
          ErrorCode::InvalidArgument, "lemma parameters need A > 0, B >= 0, alpha > 1");
  require(!probes.empty(), ErrorCode::InvalidArgument, "empty probe grid");
  const double kEE = std::exp(-std::exp(1.0));
  MonotoneFReport rep;
  rep.probes.assign(probes.begin(), probes.end());
  rep.F.resize(probes.size());
  double prev_f = 0.0;
  bool F_broken = false;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const double x = probes[k];
    require(x > 0.0 && x < std::exp(-1.0) && (k == 0 || x > probes[k - 1]), ErrorCode::InvalidArgument,
            "probes must increase strictly inside ]0, 1/e[");
    const double h = 1e-5 * x;
    const double fx = lemma_function(params, x);
    const double df = (lemma_function(params, x + h) - lemma_function(params, x - h)) / (2.0 * h);
    rep.F[k] = std::pow(x, 1.0 - params.alpha) * df;
    if (x < kEE && (fx <= prev_f || df <= 0.0)) {
      rep.f_increasing = false;
      rep.f_violations.push_back(x);
    }
    prev_f = fx;
    if (k > 0 && rep.F[k] > rep.F[k - 1]) {
      rep.F_violations.push_back(x);
      if (!F_broken) rep.x_star = probes[k - 1];
      F_broken = true;
    }
  }
  if (!F_broken) rep.x_star = probes.back();
  return rep;
}

std::vector<double> Quantizer::cell_masses() const {
  std::vector<double> counts(static_cast<std::size_t>(codebook.rows()), 0.0);
  for (std::size_t a : assignment) counts[a] += 1.0;
  const double total = static_cast<double>(assignment.size());
  for (double& c : counts) c /= total;
  return counts;
}

double empirical_entropy(const Quantizer& q, EntropyOrder alpha) {
  require(!q.assignment.empty(), ErrorCode::InvalidArgument, "quantizer has no assigned samples");
  std::vector<double> counts(static_cast<std::size_t>(q.codebook.rows()), 0.0);
  for (std::size_t a : q.assignment) counts[a] += 1.0;
  return renyi_entropy(ProbVector::from_masses(counts), alpha);
}

BallNetResult build_ball_net_quantizer(const PathEnsemble& ensemble, const NormSpec& norm, double s, double delta,
                                       const Distortion& rho, std::span<const EntropyOrder> orders) {
  const Eigen::Index n = ensemble.paths.rows();
  require(n >= 2, ErrorCode::DegenerateEnsemble, "ball+net quantizer needs at least two samples");
  require(s > 0.0 && delta > 0.0, ErrorCode::InvalidArgument, "s and delta must be positive");
  const NormEvaluator eval(ensemble.grid, norm);
  const auto& paths = ensemble.paths;

  std::vector<Eigen::Index> net;
  BallNetResult res;
  res.quantizer.assignment.resize(static_cast<std::size_t>(n));
  NeumaierSum distortion;
  std::size_t inside = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r0 = eval(paths.row(i));
    if (r0 <= s) {
      res.quantizer.assignment[static_cast<std::size_t>(i)] = 0;
      distortion += distortion_value(r0, rho);
      ++inside;
      continue;
    }
    std::size_t cell = 0;
    for (std::size_t j = 0; j < net.size(); ++j) {
      if (eval.within(paths.row(i), paths.row(net[j]), delta)) {
        cell = j + 1;
        distortion += distortion_value(eval(paths.row(i) - paths.row(net[j])), rho);
        break;
      }
    }
    if (cell == 0) {
      net.push_back(i);
      cell = net.size();
    }
    res.quantizer.assignment[static_cast<std::size_t>(i)] = cell;
  }

  res.quantizer.codebook = RowMatrixXd::Zero(static_cast<Eigen::Index>(net.size() + 1), paths.cols());
  for (std::size_t j = 0; j < net.size(); ++j) res.quantizer.codebook.row(static_cast<Eigen::Index>(j + 1)) = paths.row(net[j]);
  res.distortion = distortion.value() / static_cast<double>(n);
  res.center_mass = static_cast<double>(inside) / static_cast<double>(n);
  for (const EntropyOrder& a : orders) res.entropies.push_back(empirical_entropy(res.quantizer, a));
  return res;
}

}  // namespace qgauss
