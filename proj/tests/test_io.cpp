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

#include <sstream>

#include "test_support.hpp"

using namespace tplot;

TEST(Io, NetworkJsonRoundTrip) {
  for (const auto& name : fixtures::fixture_names()) {
    const Network net = fixtures::load_fixture(name);
    const auto j = io::network_to_json(net);
    const Network back = io::network_from_json(j);
    EXPECT_EQ(io::network_to_json(back).dump(), j.dump()) << name;
  }
}

TEST(Io, MalformedNetworkIsStructuralError) {
  EXPECT_THROW(io::network_from_json(nlohmann::json::parse(R"({"nodes": 3})")), StructuralError);
}

TEST(Io, RoutingJsonRoundTrip) {
  const Network net = fixtures::fix5();
  const Routing f = shortest_path_routing(net);
  const Routing back = io::routing_from_json(net, io::routing_to_json(net, f));
  for (int e = 0; e < net.edge_count(); ++e) EXPECT_TRUE(back.edge_flows(e) == f.edge_flows(e));
}

TEST(Io, MatrixCsv) {
  std::istringstream in("0,1\n1,0\n");
  const SquareMatrix m = io::matrix_from_csv(in);
  EXPECT_EQ(m.size(), 2);
  EXPECT_EQ(m(0, 1), 1.0);
  std::istringstream bad("0,1\n1\n");
  EXPECT_THROW(io::matrix_from_csv(bad), StructuralError);
  std::ostringstream out;
  io::write_matrix_row(out, m);
  EXPECT_EQ(out.str(), "0,1,1,0\n");
}
