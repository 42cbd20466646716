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
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "tplot/error.hpp"
#include "tplot/matrix.hpp"
#include "tplot/net.hpp"
#include "tplot/stats.hpp"

namespace tplot {

class ZeroOneMatrix {
 public:
  explicit ZeroOneMatrix(int n = 0) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}

  static ZeroOneMatrix from(const SquareMatrix& m) {
    ZeroOneMatrix z(m.size());
    for (int i = 0; i < m.size(); ++i) {
      for (int j = 0; j < m.size(); ++j) {
        const double v = m(i, j);
        if (v != 0.0 && v != 1.0) {
          throw StructuralError("complexity", "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                                  ") is not 0 or 1");
        }
        z.set(i, j, v == 1.0);
      }
    }
    return z;
  }

  static ZeroOneMatrix identity(int n) {
    ZeroOneMatrix z(n);
    for (int i = 0; i < n; ++i) z.set(i, i, true);
    return z;
  }

  static ZeroOneMatrix ones(int n) {
    ZeroOneMatrix z(n);
    std::fill(z.a_.begin(), z.a_.end(), 1);
    return z;
  }

  int size() const { return n_; }
  bool operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j] != 0; }
  void set(int i, int j, bool v) { a_[static_cast<std::size_t>(i) * n_ + j] = v ? 1 : 0; }

  SquareMatrix to_matrix() const {
    SquareMatrix m(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j) ? 1.0 : 0.0;
    return m;
  }

 private:
  int n_;
  std::vector<unsigned char> a_;
};

inline constexpr int kPermanentLimit = 10;

// Sum over all permutations of prod_i A[i][sigma(i)].
inline std::uint64_t permanent_bruteforce(const ZeroOneMatrix& a) {
  const int n = a.size();
  if (n > kPermanentLimit) {
    throw UnsupportedError("complexity", "brute-force permanent refused for n = " + std::to_string(n) +
                                             " (limit " + std::to_string(kPermanentLimit) + ")");
  }
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::uint64_t total = 0;
  do {
    bool all = true;
    for (int i = 0; i < n && all; ++i) all = a(i, sigma[i]);
    total += all;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

// Ryser's inclusion-exclusion formula with Gray-code subset order.
inline std::uint64_t permanent_ryser(const ZeroOneMatrix& a) {
  const int n = a.size();
  if (n == 0) return 1;
  if (n > 30) throw UnsupportedError("complexity", "Ryser permanent limited to n <= 30");
  std::vector<std::int64_t> row_sums(n, 0);
  std::int64_t total = 0;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const int col = __builtin_ctzll(next ^ gray);
    const int sign = (next >> col) & 1 ? 1 : -1;
    gray = next;
    std::int64_t prod = 1;
    for (int i = 0; i < n; ++i) {
      row_sums[i] += sign * static_cast<int>(a(i, col));
      prod *= row_sums[i];
    }
    const int bits = __builtin_popcountll(gray);
    total += ((n - bits) % 2 ? -1 : 1) * prod;
  }
  return static_cast<std::uint64_t>(total);
}

// Routing with f_sd(e) = A_sd for every commodity, including s = d. A
// commodity with A_sd = 0 follows a unit-weight shortest path that avoids e;
// with A_sd = 1 it walks s -> tail(e), crosses e, then head(e) -> d, both legs
// avoiding e. The second leg also avoids the first leg's edges when such a
// path exists, so no fraction exceeds 1.
inline Routing reduction_routing(const Network& net, int e, const ZeroOneMatrix& a) {
  const int n = net.node_count();
  if (a.size() != n) {
    throw StructuralError("complexity", "matrix dimension " + std::to_string(a.size()) + " differs from n = " +
                                            std::to_string(n));
  }
  if (e < 0 || e >= net.edge_count()) throw DomainError("complexity", "edge index out of range");
  const auto cls = classify_edges(net);
  if (std::find(cls.bridges.begin(), cls.bridges.end(), e) != cls.bridges.end()) {
    throw DomainError("complexity", "edge " + net.edge(e).id + " is a bridge; the reduction needs a non-bridge edge");
  }
  auto unit = [](int) { return 1.0; };
  auto not_e = [e](int k) { return k != e; };
  auto leg = [&](int from, int to, auto usable) -> std::optional<std::vector<int>> {
    if (from == to) return std::vector<int>{};
    return detail::best_path(net, from, to, unit, usable);
  };
  auto must = [&](std::optional<std::vector<int>> p, int from, int to) {
    if (!p) {
      throw DomainError("complexity", "no path avoiding " + net.edge(e).id + " for " + detail::pair_name(net, from, to));
    }
    return *p;
  };
  const int tail = net.edge(e).tail, head = net.edge(e).head;
  Routing f(n, net.edge_count());
  for (int s = 0; s < n; ++s) {
    for (int d = 0; d < n; ++d) {
      if (!a(s, d)) {
        if (s == d) continue;
        for (int k : must(leg(s, d, not_e), s, d)) f.add_fraction(s, d, k, 1.0);
        continue;
      }
      const std::vector<int> first = must(leg(s, tail, not_e), s, tail);
      auto avoid_first = [&](int k) { return k != e && std::find(first.begin(), first.end(), k) == first.end(); };
      auto second = leg(head, d, avoid_first);
      if (!second) second = must(leg(head, d, not_e), head, d);
      for (int k : first) f.add_fraction(s, d, k, 1.0);
      f.add_fraction(s, d, e, 1.0);
      for (int k : *second) f.add_fraction(s, d, k, 1.0);
    }
  }
  return f;
}

struct ReductionCheck {
  std::uint64_t permanent = 0;
  std::uint64_t scaled_mass = 0;  // n! * EC_PDF(e, L) with L = n / c(e)
  double level = 0.0;
  bool equal = false;
};

inline constexpr int kReductionLimit = 8;

inline ReductionCheck verify_reduction(const Network& net, int e, const ZeroOneMatrix& a) {
  const int n = net.node_count();
  if (n > kReductionLimit) {
    throw UnsupportedError("complexity", "reduction check limited to n <= " + std::to_string(kReductionLimit));
  }
  const Routing f = reduction_routing(net, e, a);
  // The load on e is an integer count of crossings; scaling by c(e) happens
  // only when reporting L, so atom matching is exact.
  const Network unit_e = [&] {
    std::vector<double> caps = net.capacities();
    caps[e] = 1.0;
    return net.with_capacities(caps);
  }();
  const TPlot tp = exact_tplot_permutations(unit_e, f, Target::edge_load(e), false, kReductionLimit);
  ReductionCheck r;
  r.level = n / net.edge(e).capacity;
  for (const Atom& at : tp.atoms) {
    if (at.value == static_cast<double>(n)) r.scaled_mass = static_cast<std::uint64_t>(at.count);
  }
  r.permanent = permanent_bruteforce(a);
  r.equal = r.permanent == r.scaled_mass;
  return r;
}

}  // namespace tplot
