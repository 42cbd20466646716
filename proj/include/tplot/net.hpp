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
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tplot/assignment.hpp"
#include "tplot/error.hpp"
#include "tplot/matrix.hpp"

namespace tplot {

inline constexpr double kConservationTolerance = 1e-9;

struct Node {
  int id = 0;
  std::string name;
  double ingress = 1.0;  // r_i: max rate the node may initiate
  double egress = 1.0;   // q_i: max rate the node may receive
};

// Edge as supplied by a caller or a file: endpoints given by node id.
struct EdgeSpec {
  std::string id;
  int from = 0;
  int to = 0;
  double capacity = 1.0;
  std::optional<double> weight;
};

// Edge after resolution: endpoints are node indices.
struct Edge {
  std::string id;
  int tail = 0;
  int head = 0;
  double capacity = 1.0;
  std::optional<double> weight;
};

// Directed capacitated graph with per-node rate limits. Immutable once built.
class Network {
 public:
  Network() = default;

  Network(std::vector<Node> nodes, const std::vector<EdgeSpec>& edges) : nodes_(std::move(nodes)) {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const Node& nd = nodes_[k];
      if (!index_of_id_.emplace(nd.id, static_cast<int>(k)).second) {
        throw StructuralError("net", "duplicate node id " + std::to_string(nd.id));
      }
      if (!(nd.ingress >= 0.0) || !(nd.egress >= 0.0)) {
        throw DomainError("net", "node " + std::to_string(nd.id) + " has a negative rate");
      }
    }
    std::set<std::pair<int, int>> seen_pairs;
    for (const EdgeSpec& es : edges) {
      auto tail = index_of_id_.find(es.from);
      auto head = index_of_id_.find(es.to);
      if (tail == index_of_id_.end() || head == index_of_id_.end()) {
        throw StructuralError("net", "edge " + es.id + " references an unknown node");
      }
      if (tail->second == head->second) {
        throw StructuralError("net", "edge " + es.id + " is a self-loop");
      }
      if (!(es.capacity > 0.0)) {
        throw DomainError("net", "edge " + es.id + " must have positive capacity");
      }
      if (es.weight && !(*es.weight > 0.0)) {
        throw DomainError("net", "edge " + es.id + " must have positive weight");
      }
      if (!seen_pairs.emplace(tail->second, head->second).second) {
        throw StructuralError("net", "parallel edge " + es.id);
      }
      if (!index_of_edge_.emplace(es.id, static_cast<int>(edges_.size())).second) {
        throw StructuralError("net", "duplicate edge id " + es.id);
      }
      edges_.push_back({es.id, tail->second, head->second, es.capacity, es.weight});
    }
  }

  int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Node& node(int index) const { return nodes_.at(index); }
  const Edge& edge(int index) const { return edges_.at(index); }

  bool homogeneous() const noexcept {
    return std::all_of(nodes_.begin(), nodes_.end(),
                       [](const Node& n) { return n.ingress == 1.0 && n.egress == 1.0; });
  }

  bool has_weights() const noexcept {
    return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight.has_value(); });
  }

  int node_index(int id) const {
    auto it = index_of_id_.find(id);
    if (it == index_of_id_.end()) throw StructuralError("net", "unknown node id " + std::to_string(id));
    return it->second;
  }

  // Edge lookup by id, or by "TAIL-HEAD" using node names.
  int edge_index(const std::string& key) const {
    if (auto it = index_of_edge_.find(key); it != index_of_edge_.end()) return it->second;
    if (auto dash = key.find('-'); dash != std::string::npos) {
      const std::string a = key.substr(0, dash), b = key.substr(dash + 1);
      for (int k = 0; k < edge_count(); ++k) {
        if (nodes_[edges_[k].tail].name == a && nodes_[edges_[k].head].name == b) return k;
      }
    }
    throw StructuralError("net", "unknown edge " + key);
  }

  std::optional<int> find_edge(int tail, int head) const {
    for (int k = 0; k < edge_count(); ++k) {
      if (edges_[k].tail == tail && edges_[k].head == head) return k;
    }
    return std::nullopt;
  }

  std::vector<double> capacities() const {
    std::vector<double> c;
    c.reserve(edges_.size());
    for (const Edge& e : edges_) c.push_back(e.capacity);
    return c;
  }

  // Copy of this network with replaced capacities.
  Network with_capacities(const std::vector<double>& caps) const {
    if (caps.size() != edges_.size()) throw StructuralError("net", "capacity vector size mismatch");
    Network out = *this;
    for (std::size_t k = 0; k < caps.size(); ++k) {
      if (!(caps[k] > 0.0)) throw DomainError("net", "edge " + edges_[k].id + " must have positive capacity");
      out.edges_[k].capacity = caps[k];
    }
    return out;
  }

  // Copy with replaced node rates (heterogeneous variants of a topology).
  Network with_rates(const std::vector<double>& ingress, const std::vector<double>& egress) const {
    if (ingress.size() != nodes_.size() || egress.size() != nodes_.size()) {
      throw StructuralError("net", "rate vector size mismatch");
    }
    Network out = *this;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      out.nodes_[k].ingress = ingress[k];
      out.nodes_[k].egress = egress[k];
    }
    return out;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<int, int> index_of_id_;
  std::map<std::string, int> index_of_edge_;
};

// Oblivious routing: f_ij(e) for every commodity (i, j) and edge e.
// Stored as one dense n x n matrix per edge (absent entries are 0).
class Routing {
 public:
  Routing() = default;
  Routing(int n, int edge_count) : n_(n), per_edge_(edge_count, SquareMatrix(n)) {}

  int node_count() const noexcept { return n_; }
  int edge_count() const noexcept { return static_cast<int>(per_edge_.size()); }

  double fraction(int src, int dst, int edge) const { return per_edge_.at(edge)(src, dst); }
  void set_fraction(int src, int dst, int edge, double value) { per_edge_.at(edge)(src, dst) = value; }
  void add_fraction(int src, int dst, int edge, double value) { per_edge_.at(edge)(src, dst) += value; }

  // The n x n matrix f(e).
  const SquareMatrix& edge_flows(int edge) const { return per_edge_.at(edge); }

  bool single_path() const noexcept {
    for (const auto& m : per_edge_) {
      for (double v : m.data()) {
        if (v != 0.0 && v != 1.0) return false;
      }
    }
    return true;
  }

 private:
  int n_ = 0;
  std::vector<SquareMatrix> per_edge_;
};

// ---------------------------------------------------------------------------
// Validation

struct ConservationViolation {
  int src = 0;
  int dst = 0;
  int node = -1;          // node index; -1 for range violations
  int edge = -1;          // edge index for range violations
  double residual = 0.0;  // required net out-flow minus actual
};

struct ValidationReport {
  std::vector<ConservationViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

inline ValidationReport validate_routing(const Network& net, const Routing& f,
                                         double tolerance = kConservationTolerance) {
  const int n = net.node_count();
  if (f.node_count() != n || f.edge_count() != net.edge_count()) {
    throw StructuralError("net", "routing dimensions do not match the network");
  }
  ValidationReport report;
  std::vector<double> net_out(n);
  for (int s = 0; s < n; ++s) {
    for (int d = 0; d < n; ++d) {
      std::fill(net_out.begin(), net_out.end(), 0.0);
      bool routed = false;
      for (int e = 0; e < net.edge_count(); ++e) {
        const double x = f.fraction(s, d, e);
        routed = routed || x != 0.0;
        if (x < -tolerance || x > 1.0 + tolerance) {
          report.violations.push_back({s, d, -1, e, x});
        }
        net_out[net.edge(e).tail] += x;
        net_out[net.edge(e).head] -= x;
      }
      // Commodities with no stored fraction are not routed and carry no demand.
      if (!routed) continue;
      for (int v = 0; v < n; ++v) {
        double required = 0.0;
        if (s != d) required = v == s ? 1.0 : (v == d ? -1.0 : 0.0);
        const double residual = required - net_out[v];
        if (std::abs(residual) > tolerance) report.violations.push_back({s, d, v, -1, residual});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Shortest paths

namespace detail {

// Distances to `target` over edges accepted by `usable`, with per-edge weights.
template <typename WeightFn, typename UsableFn>
std::vector<double> distances_to(const Network& net, int target, WeightFn weight, UsableFn usable) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(net.node_count(), inf);
  std::vector<std::vector<int>> incoming(net.node_count());
  for (int e = 0; e < net.edge_count(); ++e) {
    if (usable(e)) incoming[net.edge(e).head].push_back(e);
  }
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[target] = 0.0;
  pq.emplace(0.0, target);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (int e : incoming[v]) {
      const int u = net.edge(e).tail;
      const double nd = d + weight(e);
      if (nd < dist[u]) {
        dist[u] = nd;
        pq.emplace(nd, u);
      }
    }
  }
  return dist;
}

// Minimum-weight src -> dst path as edge indices; among ties, the one whose
// node-id sequence is lexicographically smallest. Empty optional if unreachable.
template <typename WeightFn, typename UsableFn>
std::optional<std::vector<int>> best_path(const Network& net, int src, int dst, WeightFn weight, UsableFn usable) {
  const std::vector<double> dist = distances_to(net, dst, weight, usable);
  if (!std::isfinite(dist[src])) return std::nullopt;
  std::vector<int> path;
  int v = src;
  while (v != dst) {
    int chosen = -1;
    for (int e = 0; e < net.edge_count(); ++e) {
      const Edge& ed = net.edge(e);
      if (ed.tail != v || !usable(e) || !std::isfinite(dist[ed.head])) continue;
      const double via = weight(e) + dist[ed.head];
      if (std::abs(via - dist[v]) > 1e-12 * std::max(1.0, dist[v])) continue;
      if (chosen < 0 || net.node(ed.head).id < net.node(net.edge(chosen).head).id) chosen = e;
    }
    path.push_back(chosen);
    v = net.edge(chosen).head;
  }
  return path;
}

inline std::string pair_name(const Network& net, int s, int d) {
  return "(" + net.node(s).name + ", " + net.node(d).name + ")";
}

}  // namespace detail

// Single-path routing along Dijkstra shortest paths under the edge metric.
// Self-demand is never routed (f_ii = 0).
inline Routing shortest_path_routing(const Network& net) {
  if (!net.has_weights()) throw DomainError("net", "shortest-path routing needs a weight on every edge");
  const int n = net.node_count();
  Routing f(n, net.edge_count());
  auto weight = [&](int e) { return *net.edge(e).weight; };
  auto any = [](int) { return true; };
  for (int s = 0; s < n; ++s) {
    for (int d = 0; d < n; ++d) {
      if (s == d) continue;
      auto path = detail::best_path(net, s, d, weight, any);
      if (!path) throw DomainError("net", "no path for pair " + detail::pair_name(net, s, d));
      for (int e : *path) f.set_fraction(s, d, e, 1.0);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Congestion

// Flow crossing edge e under demand D: sum_ij D_ij f_ij(e).
inline double edge_flow(const Routing& f, int e, const TrafficMatrix& d) {
  const SquareMatrix& fe = f.edge_flows(e);
  if (d.size() != fe.size()) throw StructuralError("net", "traffic matrix dimension mismatch");
  double s = 0.0;
  auto a = fe.data();
  auto b = d.data();
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double edge_congestion(const Network& net, const Routing& f, int e, const TrafficMatrix& d) {
  return edge_flow(f, e, d) / net.edge(e).capacity;
}

inline double global_congestion(const Network& net, const Routing& f, const TrafficMatrix& d) {
  double gc = 0.0;
  for (int e = 0; e < net.edge_count(); ++e) gc = std::max(gc, edge_congestion(net, f, e, d));
  return gc;
}

// TP = min(1/GC, 1); zero demand counts as full throughput.
inline double throughput_from_congestion(double gc) { return gc <= 0.0 ? 1.0 : std::min(1.0 / gc, 1.0); }

inline double throughput(const Network& net, const Routing& f, const TrafficMatrix& d) {
  return throughput_from_congestion(global_congestion(net, f, d));
}

// Precomputed sparse view of a routing for fast repeated load evaluation.
class LoadEvaluator {
 public:
  struct Term {
    int src;
    int dst;
    double fraction;
  };

  LoadEvaluator(const Network& net, const Routing& f) : n_(net.node_count()), terms_(net.edge_count()) {
    if (f.node_count() != n_ || f.edge_count() != net.edge_count()) {
      throw StructuralError("net", "routing dimensions do not match the network");
    }
    for (int e = 0; e < net.edge_count(); ++e) {
      inv_capacity_.push_back(1.0 / net.edge(e).capacity);
      dense_.push_back(f.edge_flows(e));
      for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
          const double x = f.fraction(i, j, e);
          if (x != 0.0) terms_[e].push_back({i, j, x});
        }
      }
    }
  }

  int node_count() const noexcept { return n_; }
  int edge_count() const noexcept { return static_cast<int>(terms_.size()); }
  const std::vector<Term>& terms(int e) const { return terms_[e]; }

  double flow(int e, const TrafficMatrix& d) const {
    double s = 0.0;
    for (const Term& t : terms_[e]) s += t.fraction * d(t.src, t.dst);
    return s;
  }
  double flow(int e, const Permutation& sigma) const {
    const SquareMatrix& fe = dense_[e];
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += fe(i, sigma[i]);
    return s;
  }
  template <typename Demand>
  double congestion(int e, const Demand& d) const {
    return flow(e, d) * inv_capacity_[e];
  }
  template <typename Demand>
  double global(const Demand& d) const {
    double gc = 0.0;
    for (int e = 0; e < edge_count(); ++e) gc = std::max(gc, congestion(e, d));
    return gc;
  }

 private:
  int n_;
  std::vector<std::vector<Term>> terms_;
  std::vector<SquareMatrix> dense_;
  std::vector<double> inv_capacity_;
};

// ---------------------------------------------------------------------------
// Structure

struct EdgeClassification {
  std::vector<int> bridges;             // edge indices
  std::optional<int> strictly_minimal;  // unique global capacity minimum
};

inline EdgeClassification classify_edges(const Network& net) {
  EdgeClassification out;
  const int n = net.node_count();
  auto components_without = [&](int skip) {
    std::vector<int> parent(n);
    for (int v = 0; v < n; ++v) parent[v] = v;
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    int comps = n;
    for (int e = 0; e < net.edge_count(); ++e) {
      if (e == skip) continue;
      const int a = find(net.edge(e).tail), b = find(net.edge(e).head);
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
    return comps;
  };
  const int base = components_without(-1);
  for (int e = 0; e < net.edge_count(); ++e) {
    if (components_without(e) > base) out.bridges.push_back(e);
  }
  if (net.edge_count() > 0) {
    int best = 0;
    bool unique = true;
    for (int e = 1; e < net.edge_count(); ++e) {
      if (net.edge(e).capacity < net.edge(best).capacity) {
        best = e;
        unique = true;
      } else if (net.edge(e).capacity == net.edge(best).capacity) {
        unique = false;
      }
    }
    if (unique) out.strictly_minimal = best;
  }
  return out;
}

struct WorstCase {
  double congestion = 0.0;
  Permutation witness;
};

// max over permutations sigma of EC(e, f, sigma). On homogeneous networks the
// worst case over the admissible set is attained at a permutation, so this is
// the worst case over all admissible demand.
inline WorstCase worst_case_edge_congestion_witness(const Network& net, const Routing& f, int e) {
  if (!net.homogeneous()) {
    throw UnsupportedError("net", "worst-case edge congestion requires a homogeneous network");
  }
  AssignmentResult a = max_weight_assignment(f.edge_flows(e));
  return {a.value / net.edge(e).capacity, std::move(a.assignment)};
}

inline double worst_case_edge_congestion(const Network& net, const Routing& f, int e) {
  return worst_case_edge_congestion_witness(net, f, e).congestion;
}

}  // namespace tplot
