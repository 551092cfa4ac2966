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

#include "qgauss/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>

#include "qgauss/errors.hpp"

namespace qgauss {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool in_open(double x, double lo, double hi) { return x > lo && x < hi; }

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt17(xs[i]);
  }
  return out;
}

}  // namespace

FamilyTag family_tag(const CovarianceKernel& kernel) {
  return static_cast<FamilyTag>(kernel.index() + 1);
}

std::string family_name(const CovarianceKernel& kernel) {
  return std::visit(overloaded{
                        [](const FractionalBrownianSheet&) { return std::string("fbs"); },
                        [](const LevyFBM&) { return std::string("levy"); },
                        [](const IntegratedBM&) { return std::string("ibm"); },
                        [](const IntegratedSheet&) { return std::string("isheet"); },
                        [](const FractionalOU&) { return std::string("fou"); },
                        [](const SlepianField&) { return std::string("slepian"); },
                        [](const StandardNormal1D&) { return std::string("normal"); },
                    },
                    kernel);
}

int kernel_dim(const CovarianceKernel& kernel) {
  return std::visit(overloaded{
                        [](const FractionalBrownianSheet& k) { return static_cast<int>(k.hurst.size()); },
                        [](const LevyFBM& k) { return k.dim; },
                        [](const IntegratedBM&) { return 1; },
                        [](const IntegratedSheet& k) { return k.dim; },
                        [](const FractionalOU&) { return 1; },
                        [](const SlepianField& k) { return static_cast<int>(k.a.size()); },
                        [](const StandardNormal1D&) { return 1; },
                    },
                    kernel);
}

bool is_integrated(const CovarianceKernel& kernel) {
  return std::holds_alternative<IntegratedBM>(kernel) || std::holds_alternative<IntegratedSheet>(kernel);
}

void validate_kernel(const CovarianceKernel& kernel, const GridSpec& grid) {
  constexpr auto E = ErrorCode::KernelParameterOutOfRange;
  std::visit(overloaded{
                 [&](const FractionalBrownianSheet& k) {
                   require(!k.hurst.empty(), E, "fractional Brownian sheet needs at least one Hurst index");
                   for (double h : k.hurst) require(in_open(h, 0.0, 1.0), E, "Hurst indices must lie in ]0,1[");
                 },
                 [&](const LevyFBM& k) {
                   require(in_open(k.hurst, 0.0, 1.0), E, "Levy fBm Hurst index must lie in ]0,1[");
                   require(k.dim >= 1, E, "Levy fBm dimension must be positive");
                 },
                 [&](const IntegratedBM& k) {
                   require(std::isfinite(k.beta) && k.beta > 0.0, E, "integration order beta must be > 0");
                 },
                 [&](const IntegratedSheet& k) {
                   require(k.m >= 1, E, "integrated sheet order m must be a positive integer");
                   require(k.dim >= 1, E, "integrated sheet dimension must be positive");
                 },
                 [&](const FractionalOU& k) {
                   require(std::isfinite(k.gamma) && k.gamma > 0.0, E, "OU rate gamma must be > 0");
                   require(in_open(k.hurst, 0.0, 2.0), E, "OU index H must lie in ]0,2[");
                 },
                 [&](const SlepianField& k) {
                   require(!k.a.empty(), E, "Slepian field needs at least one window");
                   for (double a : k.a) require(std::isfinite(a) && a > 0.0, E, "Slepian windows must be > 0");
                 },
                 [&](const StandardNormal1D&) {
                   require(grid.size() == 1, E, "the standard normal oracle kernel lives on a one-point grid");
                 },
             },
             kernel);
  require(kernel_dim(kernel) == grid.dim, ErrorCode::DimensionMismatch,
          "kernel dimension " + std::to_string(kernel_dim(kernel)) + " does not match grid dimension " +
              std::to_string(grid.dim));
}

namespace detail {
void throw_not_closed_form() {
  fail(ErrorCode::InvalidArgument, "integrated kernels have no closed form; use integrated_covariance");
}
}  // namespace detail

std::string canonical_string(const CovarianceKernel& kernel) {
  return std::visit(overloaded{
                        [](const FractionalBrownianSheet& k) { return "fbs(H=" + join(k.hurst) + ")"; },
                        [](const LevyFBM& k) {
                          return "levy(H=" + fmt17(k.hurst) + ",d=" + std::to_string(k.dim) + ")";
                        },
                        [](const IntegratedBM& k) { return "ibm(beta=" + fmt17(k.beta) + ")"; },
                        [](const IntegratedSheet& k) {
                          return "isheet(m=" + std::to_string(k.m) + ",d=" + std::to_string(k.dim) + ")";
                        },
                        [](const FractionalOU& k) {
                          return "fou(gamma=" + fmt17(k.gamma) + ",H=" + fmt17(k.hurst) + ")";
                        },
                        [](const SlepianField& k) { return "slepian(a=" + join(k.a) + ")"; },
                        [](const StandardNormal1D&) { return std::string("normal()"); },
                    },
                    kernel);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qgauss
