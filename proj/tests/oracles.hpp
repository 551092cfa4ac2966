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

// Reference values computed independently of the library code paths.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace qgauss::oracle {

/// P(sup_{[0,1]} |B_t| <= s) for standard Brownian motion as the
/// alternating series (4/pi) sum (-1)^k / (2k+1) exp(-(2k+1)^2 pi^2 / (8 s^2)).
inline double brownian_sup_cdf(double s) {
  if (s <= 0.0) return 0.0;
  const double pi = std::numbers::pi;
  if (s > 3.0) {
    // Dual series from the method of images, faster for large s:
    // 1 - 2 sum_k (-1)^k erfc((2k+1) s / sqrt 2) type tail, written as
    // sum_k (-1)^k [Phi((2k+1)s) - Phi((2k-1)s)] over all integers.
    double acc = 0.0;
    for (int k = -50; k <= 50; ++k) {
      const double hi = 0.5 * std::erfc(-(2.0 * k + 1.0) * s / std::sqrt(2.0));
      const double lo = 0.5 * std::erfc(-(2.0 * k - 1.0) * s / std::sqrt(2.0));
      acc += (k % 2 == 0 ? 1.0 : -1.0) * (hi - lo);
    }
    return acc;
  }
  double acc = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double m = 2.0 * k + 1.0;
    const double term = std::exp(-m * m * pi * pi / (8.0 * s * s)) / m;
    acc += (k % 2 == 0 ? term : -term);
    if (term < 1e-18) break;
  }
  return 4.0 / pi * acc;
}

/// Leading discrete-monitoring shift of a Brownian sup: observing on a mesh
/// of width dt behaves like the continuous sup at s + kShift sqrt(dt).
inline constexpr double kDiscreteSupShift = 0.5825971579390106;

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 48) {
  const auto simpson = [&](double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson(flo, flm, fmid, mid - lo);
        const double right = simpson(fmid, frm, fhi, hi - mid);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) + rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, depth);
}

inline double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

/// E[Z^r 1{|Z| <= s}] by quadrature of the density.
inline double normal_ball_moment(double s, double r) {
  return 2.0 * adaptive_simpson([r](double z) { return std::pow(z, r) * std_normal_pdf(z); }, 0.0, s, 1e-14);
}

/// Closed form of the r = 2 moment: P(|Z| <= s) - 2 s phi(s).
inline double normal_ball_second_moment(double s) {
  return std::erf(s / std::sqrt(2.0)) - 2.0 * s * std_normal_pdf(s);
}

/// s with P(|Z| <= s) = q, by bisection on erf.
inline double normal_ball_radius(double q) {
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erf(mid / std::sqrt(2.0)) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// E X_t X_s for X_t = (1/Gamma(beta)) int_0^t (t-u)^{beta-1} B_u du, via the
/// stochastic-integral form int_0^{min} (t-v)^beta (s-v)^beta dv / Gamma(beta+1)^2.
inline double integrated_bm_covariance(double beta, double t, double s) {
  const double m = std::min(t, s);
  if (m <= 0.0) return 0.0;
  const double g = std::tgamma(beta + 1.0);
  const auto f = [&](double v) { return std::pow(t - v, beta) * std::pow(s - v, beta); };
  return adaptive_simpson(f, 0.0, m, 1e-13) / (g * g);
}

/// Derivative of x (log 1/x)^{-A} (log log 1/x)^B.
inline double lemma_derivative(double A, double B, double x) {
  const double L = std::log(1.0 / x);
  const double ll = std::log(L);
  return std::pow(L, -A - 1.0) * std::pow(ll, B - 1.0) * (L * ll + A * ll - B);
}

}  // namespace qgauss::oracle
