// Copyright 2026 The tplot Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tplot {

// splitmix64 finalizer. Used to derive independent chain seeds from a
// master seed: chain_seed(master, k) = splitmix64(master + k * golden).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t chain_seed(std::uint64_t master, std::uint64_t chain) noexcept {
  return splitmix64(master + chain * 0x9E3779B97F4A7C15ULL);
}

// Thin wrapper over mt19937_64 with the handful of draws the samplers use.
// Integer and unit draws are computed by hand so sequences do not depend
// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with
  // rejection, unbiased.
  int below(int bound) {
    const auto b = static_cast<std::uint64_t>(bound);
    std::uint64_t x = engine_();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * b;
    auto low = static_cast<std::uint64_t>(m);
    if (low < b) {
      const std::uint64_t threshold = -b % b;
      while (low < threshold) {
        x = engine_();
        m = static_cast<unsigned __int128>(x) * b;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<int>(m >> 64);
  }

  // Standard normal via Marsaglia polar method (cached pair).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double k = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * k;
    has_spare_ = true;
    return u * k;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tplot
