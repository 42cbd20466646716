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

ZeroOneMatrix random01(int n, std::mt19937_64& gen, double p = 0.6) {
  std::bernoulli_distribution coin(p);
  ZeroOneMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.set(i, j, coin(gen));
  return a;
}

std::uint64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST(Permanent, IdentityAndAllOnes) {
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(permanent_bruteforce(ZeroOneMatrix::identity(n)), 1u);
    EXPECT_EQ(permanent_bruteforce(ZeroOneMatrix::ones(n)), factorial(n));
  }
  ZeroOneMatrix a(2);
  a.set(0, 0, true);
  a.set(0, 1, true);
  a.set(1, 0, true);
  EXPECT_EQ(permanent_bruteforce(a), 1u);
  EXPECT_THROW(permanent_bruteforce(ZeroOneMatrix(11)), UnsupportedError);
}

TEST(Permanent, RyserAgreesWithBruteForce) {
  std::mt19937_64 gen(1);
  for (int n = 1; n <= 7; ++n)
    for (int t = 0; t < 20; ++t) {
      const ZeroOneMatrix a = random01(n, gen);
      EXPECT_EQ(permanent_ryser(a), permanent_bruteforce(a));
    }
  EXPECT_EQ(permanent_ryser(ZeroOneMatrix::ones(10)), factorial(10));
}

TEST(Permanent, InvariantUnderRowAndColumnPermutation) {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 20; ++t) {
    const ZeroOneMatrix a = random01(6, gen);
    std::vector<int> rp(6), cp(6);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), gen);
    std::shuffle(cp.begin(), cp.end(), gen);
    ZeroOneMatrix b(6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) b.set(i, j, a(rp[i], cp[j]));
    EXPECT_EQ(permanent_bruteforce(a), permanent_bruteforce(b));
  }
}

TEST(ZeroOne, FromMatrixRejectsOtherValues) {
  SquareMatrix m(2);
  m(0, 1) = 0.5;
  EXPECT_THROW(ZeroOneMatrix::from(m), StructuralError);
  m(0, 1) = 1.0;
  EXPECT_TRUE(ZeroOneMatrix::from(m)(0, 1));
}

TEST(Reduction, AllZerosAvoidsEdge) {
  const Network net = fixtures::fix5();
  const Routing f = reduction_routing(net, 0, ZeroOneMatrix(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_EQ(f.fraction(i, j, 0), 0.0);
  EXPECT_TRUE(validate_routing(net, f).ok());
}

TEST(Reduction, AllOnesOnCompleteGraph) {
  std::mt19937_64 gen(3);
  const Network net = tplot::testing::random_complete(5, gen);
  const Routing f = reduction_routing(net, 0, ZeroOneMatrix::ones(5));
  EXPECT_TRUE(validate_routing(net, f).ok());
  const LoadEvaluator eval(net, f);
  for (const auto& p : tplot::testing::all_permutations(5, false)) EXPECT_EQ(eval.congestion(0, p), 5.0);
}

TEST(Reduction, RandomMatrixIdentityPerPermutation) {
  const Network net = fixtures::fix5();
  std::mt19937_64 gen(4);
  for (int t = 0; t < 10; ++t) {
    const ZeroOneMatrix a = random01(5, gen);
    const Routing f = reduction_routing(net, 0, a);
    ASSERT_TRUE(validate_routing(net, f).ok());
    const LoadEvaluator eval(net, f);
    for (const auto& p : tplot::testing::all_permutations(5, false)) {
      bool all = true;
      for (int i = 0; i < 5; ++i) all = all && a(i, p[i]);
      EXPECT_EQ(eval.congestion(0, p) == 5.0, all);
    }
  }
}

TEST(Reduction, BridgeRejected) {
  // a <-> b <-> c: every edge is a bridge of the underlying graph.
  const Network net({{0, "a"}, {1, "b"}, {2, "c"}},
                    {{"ab", 0, 1, 1.0, 1.0}, {"ba", 1, 0, 1.0, 1.0}, {"bc", 1, 2, 1.0, 1.0}, {"cb", 2, 1, 1.0, 1.0}});
  EXPECT_THROW(reduction_routing(net, 0, ZeroOneMatrix(3)), DomainError);
  EXPECT_THROW(reduction_routing(fixtures::fix5(), 0, ZeroOneMatrix(4)), StructuralError);
}

TEST(VerifyReduction, IdentityAndZero) {
  const Network net = fixtures::fix5();
  const auto id = verify_reduction(net, 0, ZeroOneMatrix::identity(5));
  EXPECT_EQ(id.permanent, 1u);
  EXPECT_EQ(id.scaled_mass, 1u);
  EXPECT_TRUE(id.equal);
  const auto zero = verify_reduction(net, 0, ZeroOneMatrix(5));
  EXPECT_EQ(zero.permanent, 0u);
  EXPECT_EQ(zero.scaled_mass, 0u);
  EXPECT_TRUE(zero.equal);
}

TEST(VerifyReduction, RandomMatricesOnSmallNetworks) {
  std::mt19937_64 gen(5);
  for (int n : {3, 4, 5}) {
    const Network net = n == 5 ? fixtures::fix5() : tplot::testing::random_complete(n, gen);
    for (int t = 0; t < 20; ++t) {
      const auto r = verify_reduction(net, 0, random01(n, gen));
      EXPECT_TRUE(r.equal) << r.permanent << " vs " << r.scaled_mass;
    }
  }
}

TEST(VerifyReduction, NonUnitCapacityLevel) {
  Network net = fixtures::fix5();
  std::vector<double> caps = net.capacities();
  caps[0] = 3.0;
  net = net.with_capacities(caps);
  const auto r = verify_reduction(net, 0, ZeroOneMatrix::ones(5));
  EXPECT_DOUBLE_EQ(r.level, 5.0 / 3.0);
  EXPECT_EQ(r.permanent, 120u);
  EXPECT_TRUE(r.equal);
}

TEST(StrictlyMinimal, GlobalAtomMassEqualsEdgeAtomMass) {
  const Network net = fixtures::fix5_minimal();
  const int e = *classify_edges(net).strictly_minimal;
  std::mt19937_64 gen(6);
  for (int t = 0; t < 10; ++t) {
    const ZeroOneMatrix a = random01(5, gen, 0.7);
    const Routing f = reduction_routing(net, e, a);
    const double level = 5.0 / net.edge(e).capacity;
    const TPlot gc = exact_tplot_permutations(net, f, Target::global(), false);
    const TPlot ec = exact_tplot_permutations(net, f, Target::edge_load(e), false);
    EXPECT_EQ(gc.mass_at(level), ec.mass_at(level));
  }
}
