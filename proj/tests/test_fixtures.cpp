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

TEST(Fixtures, AbileneHomogeneous) {
  const Network net = fixtures::load_fixture("abilene-homogeneous");
  EXPECT_EQ(net.node_count(), 11);
  EXPECT_EQ(net.edge_count(), 28);
  EXPECT_TRUE(net.homogeneous());
  for (const Edge& e : net.edges()) EXPECT_EQ(e.capacity, 1.0);
  EXPECT_EQ(net.edge_index("e13"), net.edge_index("KC-IND"));
  EXPECT_EQ(net.edge_index("e1"), net.edge_index("SEA-SNV"));
}

TEST(Fixtures, AbileneHeterogeneousStaysBelowSaturation) {
  const Network net = fixtures::load_fixture("abilene-heterogeneous");
  EXPECT_FALSE(net.homogeneous());
  const Routing f = shortest_path_routing(net);
  SamplerConfig cfg;
  cfg.seed = 1;
  const auto gc = sample_values(net, f, tset_for_network(TSetKind::H, net), Target::global(), 5000, cfg);
  for (double v : gc) ASSERT_LT(v, 1.0);
}

TEST(Fixtures, ToyAndFix5) {
  for (const char* name : {"toy4", "fix5", "fix5-minimal"}) {
    const Network net = fixtures::load_fixture(name);
    EXPECT_TRUE(validate_routing(net, shortest_path_routing(net)).ok()) << name;
  }
  EXPECT_EQ(fixtures::toy4().node_count(), 4);
  const Network f5 = fixtures::fix5();
  EXPECT_EQ(f5.node_count(), 5);
  EXPECT_TRUE(classify_edges(f5).bridges.empty());
  EXPECT_EQ(classify_edges(fixtures::fix5_minimal()).strictly_minimal, 0);
  EXPECT_THROW(fixtures::load_fixture("nowhere"), DomainError);
}
