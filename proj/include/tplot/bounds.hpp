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
#include <limits>
#include <string>
#include <vector>

#include "tplot/error.hpp"
#include "tplot/net.hpp"
#include "tplot/stats.hpp"

namespace tplot {

// One-tailed Chebyshev (Cantelli) bound on Pr{X >= c} from mean and SD.
inline double chebyshev_saturation_bound(const GaussianParams& g, double c) {
  if (c <= g.mu) return 1.0;
  if (g.sigma == 0.0) return 0.0;
  const double k = (c - g.mu) / g.sigma;
  return 1.0 / (1.0 + k * k);
}

// Capacity that keeps the Chebyshev saturation bound at 1 - G.
inline double capacity_for_guarantee(const GaussianParams& g, double guarantee) {
  if (!(guarantee >= 0.0)) throw DomainError("bounds", "guarantee level must be >= 0");
  if (guarantee >= 1.0) throw DomainError("bounds", "guarantee level 1 needs infinite capacity");
  return g.mu + g.sigma * std::sqrt(guarantee / (1.0 - guarantee));
}

// Synthetic edge whose load is EC(e1) + EC(e2): f(e12) = f(e1)/c(e1) +
// f(e2)/c(e2) with capacity 1 (with unit capacities, f(e1) + f(e2)). It lives
// in a one-edge network over the same nodes so the usual T-Plot machinery
// applies; the routing is not a valid flow and is never validated.
struct DummyEdge {
  Network net;
  Routing routing;
  int edge = 0;
  int first = -1;
  int second = -1;
};

inline DummyEdge dummy_edge(const Network& net, const Routing& f, int e1, int e2) {
  if (e1 == e2) throw DomainError("bounds", "dummy edge needs two distinct edges");
  const int n = net.node_count();
  const Edge& a = net.edge(e1);
  DummyEdge out;
  out.first = e1;
  out.second = e2;
  out.net = Network(net.nodes(), {EdgeSpec{a.id + "+" + net.edge(e2).id, net.node(a.tail).id,
                                           net.node(a.head).id, 1.0, std::nullopt}});
  out.routing = Routing(n, 1);
  const double c1 = a.capacity, c2 = net.edge(e2).capacity;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.routing.set_fraction(i, j, 0, f.fraction(i, j, e1) / c1 + f.fraction(i, j, e2) / c2);
    }
  }
  return out;
}

// The dummy's f(e12) as an n x n matrix (for exact enumeration or moments).
inline SquareMatrix dummy_flows(const Network& net, const Routing& f, int e1, int e2) {
  const int n = net.node_count();
  SquareMatrix m(n);
  const double c1 = net.edge(e1).capacity, c2 = net.edge(e2).capacity;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = f.fraction(i, j, e1) / c1 + f.fraction(i, j, e2) / c2;
  return m;
}

// Two edges with the highest mean load over the T-Set.
inline std::pair<int, int> two_most_loaded(const std::vector<double>& edge_means) {
  if (edge_means.size() < 2) throw DomainError("bounds", "need at least two edges");
  std::vector<int> idx(edge_means.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<int>(k);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return edge_means[a] > edge_means[b]; });
  return {idx[0], idx[1]};
}

struct GlobalCdfBounds {
  double independence_approx = 0.0;  // prod_e EC_CDF(e, L)
  double upper_bound = 1.0;          // on GC_CDF(L)
  double lower_bound = 0.0;          // on Pr{GC > L}, clamped to [0, 1]
  double lower_bound_raw = 0.0;      // before clamping, may be negative
  double min_edge_cdf = 1.0;
  double dummy_cdf = 1.0;            // EC_CDF(e12, 2L)
};

// Approximation and bounds for the global-congestion CDF at L.
// dummy_tplot is the T-Plot of the dummy edge for the pair (e1, e2) whose
// plots are edge_tplots[e1], edge_tplots[e2].
inline GlobalCdfBounds global_cdf_bounds(const std::vector<const TPlot*>& edge_tplots, const TPlot& dummy_tplot,
                                         int e1, int e2, double level) {
  if (level < 0.0) throw DomainError("bounds", "congestion level L must be >= 0");
  if (edge_tplots.empty()) throw DomainError("bounds", "no edge T-Plots");
  GlobalCdfBounds b;
  b.independence_approx = 1.0;
  b.min_edge_cdf = 1.0;
  for (const TPlot* tp : edge_tplots) {
    const double c = tp->cdf(level);
    b.independence_approx *= c;
    b.min_edge_cdf = std::min(b.min_edge_cdf, c);
  }
  b.dummy_cdf = dummy_tplot.cdf(2.0 * level);
  const double tail1 = 1.0 - edge_tplots.at(e1)->cdf(level);
  const double tail2 = 1.0 - edge_tplots.at(e2)->cdf(level);
  b.lower_bound_raw = tail1 + tail2 - (1.0 - b.dummy_cdf);
  b.lower_bound = std::clamp(b.lower_bound_raw, 0.0, 1.0);
  b.upper_bound = std::min({b.min_edge_cdf, b.dummy_cdf, 1.0 - b.lower_bound});
  return b;
}

inline GlobalCdfBounds global_cdf_bounds(const std::vector<TPlot>& edge_tplots, const TPlot& dummy_tplot, int e1,
                                         int e2, double level) {
  std::vector<const TPlot*> ptrs;
  for (const TPlot& t : edge_tplots) ptrs.push_back(&t);
  return global_cdf_bounds(ptrs, dummy_tplot, e1, e2, level);
}

}  // namespace tplot
