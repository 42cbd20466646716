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

namespace {

double log_ok(const std::vector<double>& caps, const std::vector<GaussianParams>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::log(normal::cdf((caps[i] - p[i].mu) / p[i].sigma));
  return s;
}

}  // namespace

TEST(MuKSigma, Examples) {
  const std::vector<GaussianParams> p = {{1, 1}, {1, 3}};
  const auto a = mu_k_sigma_allocation(p, 6.0);
  EXPECT_DOUBLE_EQ(*a.k, 1.0);
  EXPECT_DOUBLE_EQ(a.capacities[0], 2.0);
  EXPECT_DOUBLE_EQ(a.capacities[1], 4.0);
  const auto z = mu_k_sigma_allocation(p, 2.0);
  EXPECT_DOUBLE_EQ(*z.k, 0.0);
  EXPECT_DOUBLE_EQ(z.capacities[0], 1.0);
  const auto neg = mu_k_sigma_allocation(p, 1.5);
  EXPECT_LT(*neg.k, 0.0);
  EXPECT_NEAR(recover_k(a, p), 1.0, 1e-12);
}

TEST(MuKSigma, Errors) {
  const std::vector<GaussianParams> p = {{1, 1}, {1, 3}};
  try {
    mu_k_sigma_allocation(p, 0.5);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
  EXPECT_THROW(mu_k_sigma_allocation({{1, 0}, {2, 0}}, 4.0), DomainError);
}

TEST(MuKSigma, BudgetAndRoundTrip) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<GaussianParams> p;
    for (int i = 0; i < 8; ++i) p.push_back({u(gen), u(gen) * 0.3});
    double smu = 0.0;
    for (auto& g : p) smu += g.mu;
    const double budget = smu * (1.0 + 0.5 * u(gen));
    const auto a = mu_k_sigma_allocation(p, budget);
    EXPECT_NEAR(a.sum(), budget, 1e-9);
    EXPECT_NEAR(recover_k(a, p), *a.k, 1e-12);
  }
}

TEST(Lagrangian, SingleEdgeTakesBudget) {
  const auto a = lagrangian_allocation({{1.0, 0.2}}, 3.0);
  EXPECT_NEAR(a.capacities[0], 3.0, 1e-9);
}

TEST(Lagrangian, EqualSigmaMatchesMuKSigma) {
  const std::vector<GaussianParams> p = {{1.0, 0.3}, {2.0, 0.3}, {0.5, 0.3}, {1.5, 0.3}};
  for (double budget : {4.0, 5.5, 7.0}) {
    const auto l = lagrangian_allocation(p, budget);
    const auto m = mu_k_sigma_allocation(p, budget);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(l.capacities[i], m.capacities[i], 1e-9);
    EXPECT_NEAR(l.sum(), budget, 1e-9);
  }
}

TEST(Lagrangian, MatchesGridSearchOnTwoEdges) {
  for (auto [mu1, mu2, budget] : {std::tuple{1.0, 1.0, 2.6}, std::tuple{0.5, 1.2, 2.0}, std::tuple{1.0, 1.0, 2.1}}) {
    const std::vector<GaussianParams> p = {{mu1, 0.1}, {mu2, 0.3}};
    const auto l = lagrangian_allocation(p, budget);
    double best = -1e300, best_c = 0.0;
    const int points = 1000;
    const double step = budget / points;
    for (int k = 1; k < points; ++k) {
      const double c1 = k * step;
      const double v = log_ok({c1, budget - c1}, p);
      if (v > best) {
        best = v;
        best_c = c1;
      }
    }
    EXPECT_NEAR(l.capacities[0], best_c, step);
    EXPECT_GE(log_ok(l.capacities, p), best - 1e-12);
  }
}

TEST(Lagrangian, RequiresPositiveSigma) {
  EXPECT_THROW(lagrangian_allocation({{1, 0.0}, {1, 1}}, 3.0), DomainError);
}

TEST(Saturation, Examples) {
  const std::vector<GaussianParams> p = {{1, 0.1}, {2, 0.2}, {0.5, 0.05}};
  CapacityAllocation far;
  for (auto& g : p) far.capacities.push_back(g.mu + 10 * g.sigma);
  EXPECT_LT(saturation_probability(far, p), 1e-15);
  CapacityAllocation one;
  one.capacities = {1.0};
  EXPECT_NEAR(saturation_probability(one, {{1.0, 0.4}}), 0.5, 1e-15);
  CapacityAllocation det;
  det.capacities = {2.0, 1.0};
  EXPECT_EQ(saturation_probability(det, {{1.0, 0.0}, {0.5, 0.0}}), 0.0);
  det.capacities = {2.0, 0.5};
  EXPECT_EQ(saturation_probability(det, {{1.0, 0.0}, {0.5, 0.0}}), 1.0);
}

TEST(Saturation, MuKSigmaLocallyOptimalUnderEqualSigma) {
  const std::vector<GaussianParams> p = {{1.0, 0.25}, {1.6, 0.25}, {0.7, 0.25}, {2.2, 0.25}, {1.1, 0.25}};
  const auto best = mu_k_sigma_allocation(p, 8.0);
  const double q = saturation_probability(best, p);
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    CapacityAllocation c = best;
    double mean = 0.0;
    std::vector<double> d(p.size());
    for (double& x : d) mean += (x = 0.1 * rng.normal());
    mean /= d.size();
    for (std::size_t i = 0; i < d.size(); ++i) c.capacities[i] += d[i] - mean;
    EXPECT_LE(q, saturation_probability(c, p) + 1e-15);
  }
}

TEST(Envelope, DominatesFixedSchemesAndIsMonotone) {
  const Network net = fixtures::fix5();
  const Routing f = shortest_path_routing(net);
  SamplerConfig cfg;
  cfg.seed = 3;
  const auto sample = sample_stream(TSetSpec(TSetKind::A, 5), cfg, 2000);
  std::vector<GaussianParams> params;
  std::vector<double> loads(net.edge_count(), 0.0);
  const LoadEvaluator eval(net, f);
  for (int e = 0; e < net.edge_count(); ++e) {
    std::vector<double> v;
    for (const auto& d : sample) v.push_back(eval.flow(e, d));
    params.push_back(empirical_params(v));
  }
  const double budget = net.edge_count();
  EnvelopeOptions opt;
  opt.iterations = 300;
  opt.grid_points = 8;
  opt.seed = 4;
  opt.mu_k_sigma = mu_k_sigma_allocation(params, budget).capacities;
  const auto rep = optimize_envelope(net, f, sample, budget, opt);
  ASSERT_EQ(rep.points.size(), 8u);
  double prev = 0.0;
  for (const auto& pt : rep.points) {
    EXPECT_GE(pt.envelope, pt.homogeneous);
    EXPECT_GE(pt.envelope, pt.mu_k_sigma);
    EXPECT_GE(pt.envelope, prev);
    prev = pt.envelope;
    double s = 0.0;
    for (double c : pt.allocation) {
      EXPECT_GT(c, 0.0);
      s += c;
    }
    EXPECT_NEAR(s, budget, 1e-9);
  }
  // Any single-level optimum is weakly dominated by the envelope.
  const LoadSet ls = load_set(net, f, sample);
  for (const auto& src : rep.points)
    for (const auto& pt : rep.points) EXPECT_LE(fraction_below(ls, src.allocation, pt.level), pt.envelope);
  ASSERT_FALSE(rep.restarts.empty());
  EXPECT_NEAR(rep.restarts[0].from_homogeneous, rep.restarts[0].from_mu_k_sigma, 0.1);
}

TEST(Envelope, HillClimbTraceNondecreasing) {
  const Network net = fixtures::toy4();
  const Routing f = shortest_path_routing(net);
  SamplerConfig cfg;
  const auto sample = sample_stream(TSetSpec(TSetKind::A, 4), cfg, 500);
  const LoadSet ls = load_set(net, f, sample);
  Rng rng(2);
  const auto r = hill_climb(ls, std::vector<double>(8, 1.0), 8.0, 1.0, 500, rng, 0.02, true);
  for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_GE(r.trace[k], r.trace[k - 1]);
  EXPECT_THROW(optimize_envelope(net, f, sample, 1e-9), DomainError);
  EXPECT_THROW(optimize_envelope(net, f, {}, 8.0), DomainError);
}
