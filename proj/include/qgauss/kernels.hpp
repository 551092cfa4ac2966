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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qgauss/grid.hpp"

namespace qgauss {

/// prod_i (s_i^{2H_i} + t_i^{2H_i} - |s_i - t_i|^{2H_i}) / 2; d = 1 is fBm.
struct FractionalBrownianSheet {
  std::vector<double> hurst;
};

/// X_0 = 0 and E(X_t - X_s)^2 = |t - s|^{2H} with the Euclidean norm on [0,1]^dim.
struct LevyFBM {
  double hurst = 0.5;
  int dim = 1;
};

/// Riemann-Liouville integral (1/Gamma(beta)) int_0^t (t-u)^{beta-1} B_u du.
struct IntegratedBM {
  double beta = 1.0;
};

/// int_0^t prod_j (t_j - u_j)^m / m! B(du) against a dim-parameter Brownian sheet.
struct IntegratedSheet {
  int m = 1;
  int dim = 1;
};

/// Stationary kernel exp(-gamma |t - s|^H) on [0,1].
struct FractionalOU {
  double gamma = 1.0;
  double hurst = 1.0;
};

/// prod_i max(0, a_i - |s_i - t_i|).
struct SlepianField {
  std::vector<double> a;
};

/// A single standard normal variable; only valid on a one-point grid.
struct StandardNormal1D {};

using CovarianceKernel = std::variant<FractionalBrownianSheet, LevyFBM, IntegratedBM, IntegratedSheet, FractionalOU,
                                      SlepianField, StandardNormal1D>;

enum class FamilyTag : std::uint32_t {
  FractionalBrownianSheet = 1,
  LevyFBM = 2,
  IntegratedBM = 3,
  IntegratedSheet = 4,
  FractionalOU = 5,
  SlepianField = 6,
  StandardNormal1D = 7,
};

FamilyTag family_tag(const CovarianceKernel& kernel);
std::string family_name(const CovarianceKernel& kernel);

/// Index-space dimension the kernel is defined on.
int kernel_dim(const CovarianceKernel& kernel);

/// True for kernels given by a double integral (integrated BM and sheet).
bool is_integrated(const CovarianceKernel& kernel);

/// Throws KernelParameterOutOfRange for parameters outside their open
/// intervals, DimensionMismatch when the grid dimension disagrees.
void validate_kernel(const CovarianceKernel& kernel, const GridSpec& grid);

/// Closed-form kernel value K(s, t); integrated kernels are not closed form
/// and throw InvalidArgument.
template <typename Scalar>
Scalar kernel_value(const CovarianceKernel& kernel, std::span<const Scalar> s, std::span<const Scalar> t);

/// Deterministic textual form with round-trip precision, used for hashing.
std::string canonical_string(const CovarianceKernel& kernel);

std::uint64_t fnv1a64(std::string_view bytes);

namespace detail {
[[noreturn]] void throw_not_closed_form();
}

template <typename Scalar>
Scalar kernel_value(const CovarianceKernel& kernel, std::span<const Scalar> s, std::span<const Scalar> t) {
  using std::abs, std::exp, std::max, std::pow;
  const Scalar half(0.5);
  if (const auto* k = std::get_if<FractionalBrownianSheet>(&kernel)) {
    Scalar v(1);
    for (std::size_t i = 0; i < k->hurst.size(); ++i) {
      const Scalar e = Scalar(2) * Scalar(k->hurst[i]);
      v *= half * (pow(s[i], e) + pow(t[i], e) - pow(abs(s[i] - t[i]), e));
    }
    return v;
  }
  if (const auto* k = std::get_if<LevyFBM>(&kernel)) {
    Scalar ns(0), nt(0), nd(0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      ns += s[i] * s[i];
      nt += t[i] * t[i];
      nd += (s[i] - t[i]) * (s[i] - t[i]);
    }
    // Polarization of the increment variance with X_0 = 0.
    const Scalar h(k->hurst);
    return half * (pow(ns, h) + pow(nt, h) - pow(nd, h));
  }
  if (const auto* k = std::get_if<FractionalOU>(&kernel))
    return exp(-Scalar(k->gamma) * pow(abs(s[0] - t[0]), Scalar(k->hurst)));
  if (const auto* k = std::get_if<SlepianField>(&kernel)) {
    Scalar v(1);
    for (std::size_t i = 0; i < k->a.size(); ++i) v *= max(Scalar(0), Scalar(k->a[i]) - abs(s[i] - t[i]));
    return v;
  }
  if (std::holds_alternative<StandardNormal1D>(kernel)) return Scalar(1);
  detail::throw_not_closed_form();
}

}  // namespace qgauss
