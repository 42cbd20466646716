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

TEST(Lilliefors, StatisticByHand) {
  // Four points, sample mean 0 and SD 1 after scaling.
  std::vector<double> x = {-1.5, -0.5, 0.5, 1.5};
  double mean = 0.0, ss = 0.0;
  for (double v : x) mean += v;
  mean /= 4;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / 3);
  double d = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double z = 0.5 * std::erfc(-(x[i] - mean) / sd / std::sqrt(2.0));
    d = std::max({d, (i + 1) / 4.0 - z, z - i / 4.0});
  }
  EXPECT_NEAR(lilliefors_statistic(x), d, 1e-14);
}

TEST(Lilliefors, NormalSamplesAcceptedAtNominalRate) {
  const long replicates = 20000;
  for (double alpha : {0.05, 0.20}) {
    Rng rng(1234);
    int accepted = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      std::vector<double> x(1000);
      for (double& v : x) v = 3.0 + 0.5 * rng.normal();
      accepted += !lilliefors_test(x, alpha, replicates).reject;
    }
    const double se = std::sqrt(alpha * (1 - alpha) / reps);
    EXPECT_NEAR(accepted / double(reps), 1 - alpha, 3.5 * se) << alpha;
  }
}

TEST(Lilliefors, CriticalValuesDecreaseWithAlpha) {
  const double c01 = lilliefors_critical_value(100, 0.01, 20000);
  const double c05 = lilliefors_critical_value(100, 0.05, 20000);
  const double c20 = lilliefors_critical_value(100, 0.20, 20000);
  EXPECT_GT(c01, c05);
  EXPECT_GT(c05, c20);
  // Published large-sample approximations: 0.886/sqrt(m) at 5%, 0.736/sqrt(m) at 20%.
  EXPECT_NEAR(c05, 0.886 / 10, 0.006);
  EXPECT_NEAR(c20, 0.736 / 10, 0.006);
}

TEST(Lilliefors, CounterexampleRejected) {
  auto [net, f] = tplot::testing::counterexample(10, 3);
  SamplerConfig cfg;
  cfg.seed = 2;
  const auto values = sample_values(net, f, TSetSpec(TSetKind::P, 10), Target::edge_load(0), 1000, cfg);
  EXPECT_TRUE(lilliefors_test(values, 0.20, 20000).reject);
}

TEST(Lilliefors, DegenerateAndTooSmall) {
  const auto r = lilliefors_test(std::vector<double>(50, 1.0), 0.05);
  EXPECT_TRUE(r.reject);
  EXPECT_FALSE(r.note.empty());
  EXPECT_THROW(lilliefors_test(std::vector<double>(10, 1.0), 0.05), DomainError);
  EXPECT_THROW(lilliefors_test(std::vector<double>(30, 1.0), 1.5), DomainError);
}

TEST(Npp, LinearSamplesOnIdentity) {
  const int m = 200;
  std::vector<double> x;
  for (int i = 1; i <= m; ++i) x.push_back(normal::quantile((i - 0.5) / m));
  std::reverse(x.begin(), x.end());
  for (auto [q, v] : npp_data(x)) EXPECT_NEAR(q, v, 1e-9);
  EXPECT_NEAR(npp_correlation(npp_data(x)), 1.0, 1e-12);
}

TEST(Npp, ConstantAndTwoLevel) {
  for (auto [q, v] : npp_data(std::vector<double>(10, 2.5))) EXPECT_EQ(v, 2.5);
  auto [net, f] = tplot::testing::counterexample(10, 3);
  SamplerConfig cfg;
  const auto values = sample_values(net, f, TSetSpec(TSetKind::P, 10), Target::edge_load(0), 1000, cfg);
  EXPECT_LT(npp_correlation(npp_data(values)), 0.95);
  EXPECT_THROW(npp_data({1.0}), DomainError);
}

TEST(NormalHelpers, QuantileInvertsCdf) {
  for (double p : {1e-10, 0.01, 0.3, 0.5, 0.9, 0.999999}) EXPECT_NEAR(normal::cdf(normal::quantile(p)), p, 1e-12 * std::max(1.0, p / 1e-10) + 1e-15);
  EXPECT_NEAR(normal::pdf(0.0), 1.0 / std::sqrt(2 * M_PI), 1e-15);
  EXPECT_NEAR(normal::sf(1.0) + normal::cdf(1.0), 1.0, 1e-15);
}
