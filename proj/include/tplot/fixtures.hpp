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

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "tplot/error.hpp"
#include "tplot/net.hpp"

namespace tplot::fixtures {

// Abilene backbone: 11 PoPs, 14 bidirectional 10 Gbps links (capacity 1.0),
// IGP metrics as weights. Edge ids run e1..e28 in link order below, forward
// direction first, so e13 is KC->IND.
inline const std::array<const char*, 11> kAbileneNodes = {"SEA", "SNV", "LA",  "DEN", "KC", "HOU",
                                                         "CHI", "IND", "ATL", "WDC", "NYC"};

struct Link {
  const char* a;
  const char* b;
  double weight;
};

inline const std::array<Link, 14> kAbileneLinks = {{
    {"SEA", "SNV", 861},  {"SEA", "DEN", 2095}, {"SNV", "DEN", 1295}, {"SNV", "LA", 366},   {"LA", "HOU", 1893},
    {"DEN", "KC", 639},   {"KC", "IND", 548},   {"KC", "HOU", 902},   {"HOU", "ATL", 1176}, {"IND", "CHI", 260},
    {"IND", "ATL", 587},  {"CHI", "NYC", 700},  {"ATL", "WDC", 846},  {"WDC", "NYC", 233},
}};

// Surrogate per-node maximum rates (units of 10 Gbps), used for both ingress
// and egress. Not measured data; substitute real rates via abilene_heterogeneous(r, q).
inline const std::array<double, 11> kAbileneSurrogateRates = {0.12, 0.15, 0.16, 0.08, 0.07, 0.10,
                                                              0.18, 0.06, 0.14, 0.16, 0.20};

inline int abilene_node(const std::string& name) {
  for (std::size_t i = 0; i < kAbileneNodes.size(); ++i) {
    if (name == kAbileneNodes[i]) return static_cast<int>(i);
  }
  throw StructuralError("cli", "unknown Abilene node " + name);
}

inline Network abilene_homogeneous() {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < kAbileneNodes.size(); ++i) nodes.push_back({static_cast<int>(i), kAbileneNodes[i]});
  std::vector<EdgeSpec> edges;
  for (const Link& l : kAbileneLinks) {
    const int a = abilene_node(l.a), b = abilene_node(l.b);
    edges.push_back({"e" + std::to_string(edges.size() + 1), a, b, 1.0, l.weight});
    edges.push_back({"e" + std::to_string(edges.size() + 1), b, a, 1.0, l.weight});
  }
  return Network(std::move(nodes), edges);
}

inline Network abilene_heterogeneous(const std::vector<double>& ingress, const std::vector<double>& egress) {
  return abilene_homogeneous().with_rates(ingress, egress);
}

inline Network abilene_heterogeneous() {
  const std::vector<double> r(kAbileneSurrogateRates.begin(), kAbileneSurrogateRates.end());
  return abilene_heterogeneous(r, r);
}

inline Network bidirectional(int n, const std::vector<std::pair<int, int>>& links, double capacity = 1.0) {
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({i, "n" + std::to_string(i)});
  std::vector<EdgeSpec> edges;
  for (auto [a, b] : links) {
    edges.push_back({"e" + std::to_string(edges.size()), a, b, capacity, 1.0});
    edges.push_back({"e" + std::to_string(edges.size()), b, a, capacity, 1.0});
  }
  return Network(std::move(nodes), edges);
}

// Four-node bidirectional ring with unit weights and capacities.
inline Network toy4() { return bidirectional(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }

// Five-node ring with chords 0-2, 1-3, 2-4; e0 is 0->1 and is not a bridge.
inline Network fix5() { return bidirectional(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}, {1, 3}, {2, 4}}); }

// fix5 with every capacity except e0 raised to 2, making e0 strictly minimal.
inline Network fix5_minimal() {
  const Network base = fix5();
  std::vector<double> caps(base.edge_count(), 2.0);
  caps[0] = 1.0;
  return base.with_capacities(caps);
}

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"abilene-homogeneous", "abilene-heterogeneous", "toy4", "fix5",
                                                 "fix5-minimal"};
  return names;
}

inline Network load_fixture(const std::string& name) {
  if (name == "abilene-homogeneous") return abilene_homogeneous();
  if (name == "abilene-heterogeneous") return abilene_heterogeneous();
  if (name == "toy4") return toy4();
  if (name == "fix5") return fix5();
  if (name == "fix5-minimal") return fix5_minimal();
  throw DomainError("cli", "unknown fixture '" + name + "'");
}

}  // namespace tplot::fixtures
