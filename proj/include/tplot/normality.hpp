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

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tplot/error.hpp"
#include "tplot/normal.hpp"
#include "tplot/rng.hpp"

namespace tplot {

inline constexpr std::uint64_t kLillieforsCalibrationSeed = 0x5eed1111f0f0f0f0ULL;
inline constexpr long kLillieforsReplicates = 100000;

// Kolmogorov-Smirnov distance between the sample CDF and the normal CDF
// with mean and SD estimated from the sample. Returns -1 for zero variance.
inline double lilliefors_statistic(std::vector<double> x) {
  const std::size_t m = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= m;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (m - 1));
  if (!(sd > 0.0)) return -1.0;
  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double z = normal::cdf((x[i] - mean) / sd);
    d = std::max({d, (i + 1.0) / m - z, z - static_cast<double>(i) / m});
  }
  return d;
}

// Null distribution of the statistic for sample size m, by Monte Carlo with
// a fixed seed. Sorted; computed once per (m, replicates) and cached.
inline const std::vector<double>& lilliefors_null(std::size_t m, long replicates = kLillieforsReplicates) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, long>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(m, replicates);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  Rng rng(kLillieforsCalibrationSeed ^ m);
  std::vector<double> stats;
  stats.reserve(replicates);
  std::vector<double> x(m);
  for (long r = 0; r < replicates; ++r) {
    for (double& v : x) v = rng.normal();
    stats.push_back(lilliefors_statistic(x));
  }
  std::sort(stats.begin(), stats.end());
  return cache.emplace(key, std::move(stats)).first->second;
}

inline double lilliefors_critical_value(std::size_t m, double alpha, long replicates = kLillieforsReplicates) {
  const auto& null = lilliefors_null(m, replicates);
  const auto idx = static_cast<std::size_t>(std::ceil((1.0 - alpha) * null.size())) - 1;
  return null[std::min(idx, null.size() - 1)];
}

struct LillieforsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
  std::string note;
};

inline LillieforsResult lilliefors_test(const std::vector<double>& samples, double alpha,
                                        long replicates = kLillieforsReplicates) {
  if (samples.size() < 20) throw DomainError("stats", "Lilliefors test needs at least 20 samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stats", "alpha must be in (0, 1)");
  LillieforsResult r;
  r.statistic = lilliefors_statistic(samples);
  if (r.statistic < 0.0) {
    r.statistic = 0.0;
    r.reject = true;
    r.note = "degenerate: zero sample variance";
    return r;
  }
  r.critical = lilliefors_critical_value(samples.size(), alpha, replicates);
  r.reject = r.statistic > r.critical;
  return r;
}

// Normal probability plot: (theoretical quantile, ordered sample) with
// plotting positions (i - 0.5) / m.
inline std::vector<std::pair<double, double>> npp_data(std::vector<double> samples) {
  if (samples.size() < 2) throw DomainError("stats", "probability plot needs at least 2 samples");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  std::vector<std::pair<double, double>> pts;
  pts.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    pts.emplace_back(normal::quantile((i + 0.5) / m), samples[i]);
  }
  return pts;
}

inline void write_npp_csv(std::ostream& out, const std::vector<std::pair<double, double>>& pts) {
  out << "normal_quantile,sample\n";
  out.precision(12);
  for (auto [q, v] : pts) out << q << ',' << v << '\n';
}

// Pearson correlation of the probability-plot points.
inline double npp_correlation(const std::vector<std::pair<double, double>>& pts) {
  const double m = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace tplot
