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

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace tplot;

TEST(Chebyshev, Examples) {
  EXPECT_NEAR(chebyshev_saturation_bound({1.9, 0.2}, 2.3), 0.2, 1e-12);
  EXPECT_EQ(chebyshev_saturation_bound({1.9, 0.2}, 1.9), 1.0);
  EXPECT_EQ(chebyshev_saturation_bound({1.9, 0.2}, 1.0), 1.0);
  EXPECT_EQ(chebyshev_saturation_bound({1.9, 0.0}, 2.0), 0.0);
}

TEST(Chebyshev, MonotoneAndInUnitInterval) {
  const GaussianParams g{1.0, 0.3};
  double prev = 1.0;
  for (double c = 0.5; c < 5.0; c += 0.05) {
    const double b = chebyshev_saturation_bound(g, c);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, prev);
    prev = b;
  }
}

TEST(Guarantee, ExamplesAndRoundTrip) {
  const GaussianParams g{1.9, 0.3};
  EXPECT_EQ(capacity_for_guarantee(g, 0.0), 1.9);
  EXPECT_NEAR(capacity_for_guarantee(g, 0.5), 2.2, 1e-15);
  EXPECT_NEAR(capacity_for_guarantee(g, 0.9), 2.8, 1e-12);
  EXPECT_THROW(capacity_for_guarantee(g, 1.0), DomainError);
  double prev = 0.0;
  for (double G = 0.01; G < 0.999; G += 0.01) {
    const double c = capacity_for_guarantee(g, G);
    EXPECT_GT(c, prev);
    prev = c;
    EXPECT_NEAR(chebyshev_saturation_bound(g, c), 1 - G, 1e-12);
  }
}

TEST(Chebyshev, HoldsOnSampledPlot) {
  const Network net = fixtures::abilene_homogeneous();
  const Routing f = shortest_path_routing(net);
  const int e = net.edge_index("e13");
  SamplerConfig cfg;
  cfg.seed = 1;
  const auto values = sample_values(net, f, TSetSpec(TSetKind::A, 11), Target::edge_load(e), 20000, cfg);
  const auto g = empirical_params(values);
  for (int k = 0; k < 50; ++k) {
    const double c = g.mu + (5.0 - g.mu) * k / 49.0;
    const double tail = std::count_if(values.begin(), values.end(), [&](double v) { return v >= c; }) /
                        double(values.size());
    EXPECT_LE(tail, chebyshev_saturation_bound(g, c) + 1e-12);
  }
}

TEST(DummyEdge, DisjointUnitFlowsWorstCaseTwo) {
  const Network net = fixtures::toy4();
  Routing f(4, net.edge_count());
  f.set_fraction(0, 1, 0, 1.0);
  f.set_fraction(2, 3, 2, 1.0);
  const DummyEdge d = dummy_edge(net, f, 0, 2);
  EXPECT_EQ(d.net.edge_count(), 1);
  EXPECT_EQ(worst_case_edge_congestion(d.net, d.routing, d.edge), 2.0);
  EXPECT_THROW(dummy_edge(net, f, 1, 1), DomainError);
}

TEST(DummyEdge, ZeroFlowPartnerReproducesPlot) {
  const Network net = fixtures::fix5();
  Routing f = shortest_path_routing(net);
  // An edge no shortest path uses, or clear one edge's flows.
  Routing g = f;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) g.set_fraction(i, j, 3, 0.0);
  const DummyEdge d = dummy_edge(net, g, 0, 3);
  const TPlot a = exact_tplot_permutations(net, g, Target::edge_load(0), false);
  const TPlot b = exact_tplot_permutations(d.net, d.routing, Target::edge_load(0), false);
  ASSERT_EQ(a.atoms.size(), b.atoms.size());
  for (std::size_t k = 0; k < a.atoms.size(); ++k) {
    EXPECT_EQ(a.atoms[k].value, b.atoms[k].value);
    EXPECT_EQ(a.atoms[k].count, b.atoms[k].count);
  }
}

TEST(DummyEdge, LoadIsScaledSum) {
  Network net = fixtures::fix5();
  std::vector<double> caps = net.capacities();
  caps[0] = 2.0;
  caps[5] = 0.5;
  net = net.with_capacities(caps);
  const Routing f = shortest_path_routing(net);
  const DummyEdge d = dummy_edge(net, f, 0, 5);
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto p = sample_permutation(rng, 5, false);
    const TrafficMatrix m = permutation_matrix(p);
    EXPECT_NEAR(edge_congestion(d.net, d.routing, 0, m),
                edge_congestion(net, f, 0, m) + edge_congestion(net, f, 5, m), 1e-12);
  }
}

TEST(DummyEdge, ReversePairSymmetricAroundTwiceMean) {
  const Network net = fixtures::abilene_homogeneous();
  const Routing f = shortest_path_routing(net);
  const int e = net.edge_index("e13"), r = net.edge_index("e14");
  const DummyEdge d = dummy_edge(net, f, e, r);
  SamplerConfig cfg;
  cfg.seed = 2;
  const auto v = sample_values(d.net, d.routing, TSetSpec(TSetKind::A, 11), Target::edge_load(0), 20000, cfg);
  const auto g = empirical_params(v);
  const auto single = empirical_params(sample_values(net, f, TSetSpec(TSetKind::A, 11), Target::edge_load(e), 20000, cfg));
  EXPECT_NEAR(g.mu, 2 * single.mu, 0.05 * g.mu);
  double skew = 0.0;
  for (double x : v) skew += std::pow((x - g.mu) / g.sigma, 3);
  skew /= v.size();
  EXPECT_LT(std::abs(skew), 0.15);
}

TEST(GlobalBounds, OneEdgeNetwork) {
  const Network net({{0, "a"}, {1, "b"}}, {{"ab", 0, 1, 1.0, 1.0}});
  Routing f(2, 1);
  f.set_fraction(0, 1, 0, 1.0);
  const TPlot e = exact_tplot_permutations(net, f, Target::edge_load(0), false);
  const TPlot gc = exact_tplot_permutations(net, f, Target::global(), false);
  const std::vector<const TPlot*> plots = {&e};
  for (double L : {0.0, 0.5, 1.0}) {
    // The pair degenerates to (e, e): the dummy carries twice the load.
    TPlot doubled = e;
    for (Atom& a : doubled.atoms) a.value *= 2;
    const auto b = global_cdf_bounds(plots, doubled, 0, 0, L);
    EXPECT_EQ(b.independence_approx, gc.cdf(L));
    EXPECT_EQ(b.upper_bound, gc.cdf(L));
  }
  EXPECT_THROW(global_cdf_bounds(plots, e, 0, 0, -1.0), DomainError);
}

TEST(GlobalBounds, BeyondWorstCase) {
  const Network net = fixtures::toy4();
  const Routing f = shortest_path_routing(net);
  std::vector<TPlot> plots;
  std::vector<double> means;
  for (int e = 0; e < net.edge_count(); ++e) {
    plots.push_back(exact_tplot_permutations(net, f, Target::edge_load(e), false));
    means.push_back(tplot_stats(plots.back()).mean);
  }
  auto [e1, e2] = two_most_loaded(means);
  const DummyEdge d = dummy_edge(net, f, e1, e2);
  const TPlot dp = exact_tplot_permutations(d.net, d.routing, Target::edge_load(0), false);
  const auto b = global_cdf_bounds(plots, dp, e1, e2, 10.0);
  EXPECT_EQ(b.independence_approx, 1.0);
  EXPECT_EQ(b.upper_bound, 1.0);
  EXPECT_EQ(b.lower_bound, 0.0);
  EXPECT_EQ(1.0 - b.lower_bound, 1.0);
}

TEST(GlobalBounds, ToySandwichAndTailLowerBound) {
  const Network net = fixtures::toy4();
  const Routing f = shortest_path_routing(net);
  std::vector<TPlot> plots;
  std::vector<double> means;
  for (int e = 0; e < net.edge_count(); ++e) {
    plots.push_back(exact_tplot_permutations(net, f, Target::edge_load(e), false));
    means.push_back(tplot_stats(plots.back()).mean);
  }
  auto [e1, e2] = two_most_loaded(means);
  const DummyEdge d = dummy_edge(net, f, e1, e2);
  const TPlot dp = exact_tplot_permutations(d.net, d.routing, Target::edge_load(0), false);
  const TPlot gc = exact_tplot_permutations(net, f, Target::global(), false);
  for (int k = 0; k < 20; ++k) {
    const double L = 3.0 * k / 19.0;
    const auto b = global_cdf_bounds(plots, dp, e1, e2, L);
    EXPECT_LE(b.independence_approx, gc.cdf(L) + 1e-12) << L;
    EXPECT_LE(gc.cdf(L), b.upper_bound + 1e-12) << L;
    EXPECT_LE(b.lower_bound, 1.0 - gc.cdf(L) + 1e-12) << L;
    EXPECT_LE(b.upper_bound, b.min_edge_cdf);
    EXPECT_LE(b.upper_bound, b.dummy_cdf);
    EXPECT_LE(b.upper_bound, 1.0 - b.lower_bound);
  }
}

TEST(GlobalBounds, TwoMostLoaded) {
  EXPECT_EQ(two_most_loaded({0.1, 0.5, 0.3, 0.5}), (std::pair<int, int>{1, 3}));
  EXPECT_THROW(two_most_loaded({1.0}), DomainError);
}
