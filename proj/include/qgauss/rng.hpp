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

#include <cmath>
#include <cstdint>

namespace qgauss {

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key for stream `index` under a master seed. Streams are independent of
/// how work is split, which is what keeps parallel runs bit-identical.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

/// Counter-based generator: draw k of a stream is mix64(key + k * golden).
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(stream_key(seed, stream)) {}

  constexpr std::uint64_t next_u64() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on ]0, 1].
  double next_uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    const auto x = static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(x >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Standard normals via Box-Muller on a counter stream.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

  /// Marsaglia polar method; normals come in pairs from one accepted point.
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * rng_.next_uniform() - 1.0;
      v = 2.0 * rng_.next_uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  CounterRng& uniform() { return rng_; }

 private:
  CounterRng rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qgauss
