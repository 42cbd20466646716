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
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace tplot::normal {

// Standard normal density h(x).
inline double pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Standard normal CDF H(x).
inline double cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Upper tail 1 - H(x), accurate for large x.
inline double sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// H^{-1}(p) for p in (0, 1).
inline double quantile(double p) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

// h(x) / H(x). Strictly decreasing from +inf to 0.
inline double hazard_ratio(double x) {
  const double big_h = cdf(x);
  if (big_h > 0.0) return pdf(x) / big_h;
  return -x;  // asymptote for x -> -inf
}

}  // namespace tplot::normal
