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
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tplot/error.hpp"
#include "tplot/matrix.hpp"
#include "tplot/tset.hpp"

namespace tplot {

// Relation between two index pairs (i,j), (k,l) used to group the second
// moments E[D_ij D_kl]. Sets without a forced zero diagonal are invariant
// under independent row and column permutations, giving four classes over
// all entries. Zero-diagonal sets are only invariant under relabelling the
// nodes, so the cross class (i != k, j != l) splits further; those classes
// range over off-diagonal entries only.
enum class PairClass : int {
  kSame = 0,      // i = k, j = l
  kSameRow = 1,   // i = k, j != l
  kSameCol = 2,   // i != k, j = l
  kCross = 3,     // i != k, j != l (full-diagonal sets)
  kTwoCycle = 4,  // (i,j), (j,i)
  kChain = 5,     // j = k xor l = i
  kDisjoint = 6,  // {i,j} and {k,l} disjoint
};
inline constexpr int kPairClassCount = 7;
using ClassValues = std::array<double, kPairClassCount>;

inline const char* pair_class_name(int c) {
  static const char* names[] = {"same", "same_row", "same_col", "cross", "two_cycle", "chain", "disjoint"};
  return names[c];
}

inline std::vector<int> active_classes(bool zero_diagonal) {
  if (zero_diagonal) return {0, 1, 2, 4, 5, 6};
  return {0, 1, 2, 3};
}

// Sum of x_ij * x_kl over ordered pairs in each class, in O(n^2).
// With zero_diagonal the diagonal of x is ignored.
inline ClassValues pair_class_sums(const SquareMatrix& x, bool zero_diagonal) {
  const int n = x.size();
  auto at = [&](int i, int j) { return zero_diagonal && i == j ? 0.0 : x(i, j); };
  double total = 0.0, squares = 0.0, rows2 = 0.0, cols2 = 0.0;
  std::vector<double> row(n, 0.0), col(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = at(i, j);
      total += v;
      squares += v * v;
      row[i] += v;
      col[j] += v;
    }
  }
  for (int i = 0; i < n; ++i) {
    rows2 += row[i] * row[i];
    cols2 += col[i] * col[i];
  }
  ClassValues s{};
  s[0] = squares;
  s[1] = rows2 - squares;
  s[2] = cols2 - squares;
  s[3] = total * total - rows2 - cols2 + squares;
  if (zero_diagonal) {
    double two_cycle = 0.0, through = 0.0;
    for (int i = 0; i < n; ++i) {
      through += col[i] * row[i];
      for (int j = 0; j < n; ++j) two_cycle += at(i, j) * at(j, i);
    }
    s[4] = two_cycle;
    s[5] = 2.0 * (through - two_cycle);
    s[6] = s[3] - s[4] - s[5];
    s[3] = 0.0;
  }
  return s;
}

// Number of ordered index pairs in each class.
inline ClassValues pair_class_counts(int n, bool zero_diagonal) {
  return pair_class_sums(SquareMatrix(n, 1.0), zero_diagonal);
}

// ---------------------------------------------------------------------------
// Exact permutation moments

// Permutations of `units` items in which a given set of `free` items may not
// be fixed, divided by n!. Inclusion-exclusion, normalised so terms stay small.
inline long double restricted_permutations_over_factorial(int n, int units, int free) {
  if (units < 0 || free < 0) return 0.0L;
  // (units - t)! / n!
  long double sum = 0.0L;
  long double binom = 1.0L;
  for (int t = 0; t <= free; ++t) {
    long double ratio = 1.0L;
    for (int v = units - t + 1; v <= n; ++v) ratio /= v;
    sum += (t % 2 == 0 ? 1.0L : -1.0L) * binom * ratio;
    binom = binom * (free - t) / (t + 1);
  }
  return sum;
}

// Number of derangements of n, as a double.
inline double derangement_count(int n) {
  double d0 = 1.0, d1 = 0.0;
  if (n == 0) return d0;
  for (int k = 2; k <= n; ++k) {
    const double d2 = (k - 1) * (d1 + d0);
    d0 = d1;
    d1 = d2;
  }
  return d1;
}

// ---------------------------------------------------------------------------
// Moment tables

struct MomentTable {
  TSetKind kind = TSetKind::A;
  int n = 0;
  std::uint64_t seed = 0;
  long samples = 0;  // 0 for exact tables
  bool exact = false;

  // Homogeneous kinds: normalised integral of D_ij (one value for all
  // relevant entries) and of D_ij D_kl per pair class.
  double first = 0.0;
  double first_se = 0.0;
  ClassValues second{};
  ClassValues second_se{};

  // Heterogeneous kinds: per-entry first moments (n^2, row-major) and the
  // full n^2 x n^2 second-moment matrix.
  std::vector<double> entry_first;
  std::vector<double> entry_first_se;
  std::vector<double> entry_second;
  std::vector<double> rate_ingress, rate_egress;

  bool heterogeneous() const noexcept { return kind == TSetKind::H || kind == TSetKind::HSurface; }
  bool zero_diagonal() const noexcept { return kind == TSetKind::Pd || kind == TSetKind::Sd || kind == TSetKind::Ad; }

  double entry_second_moment(int a, int b) const {
    return entry_second.at(static_cast<std::size_t>(a) * n * n + b);
  }
};

// E[sigma_ij] and E[sigma_ij sigma_kl] over uniform permutations (or
// derangements), by counting.
inline MomentTable exact_permutation_moments(int n, bool zero_diagonal) {
  MomentTable t;
  t.kind = zero_diagonal ? TSetKind::Pd : TSetKind::P;
  t.n = n;
  t.exact = true;
  if (!zero_diagonal) {
    t.first = 1.0 / n;
    t.second[0] = 1.0 / n;
    t.second[3] = n > 1 ? 1.0 / (static_cast<double>(n) * (n - 1)) : 0.0;
    return t;
  }
  // Fixing arcs of a derangement: contract each fixed path to one unit; units
  // made of a path may map to themselves (closing a cycle), untouched nodes
  // may not. Count = perms of (n - #arcs) units with (n - #touched) forbidden
  // fixed points.
  const long double dn = restricted_permutations_over_factorial(n, n, n);
  auto ratio = [&](int arcs, int touched) {
    return static_cast<double>(restricted_permutations_over_factorial(n, n - arcs, n - touched) / dn);
  };
  t.first = ratio(1, 2);
  t.second[0] = t.first;
  t.second[4] = n >= 2 ? ratio(2, 2) : 0.0;
  t.second[5] = n >= 3 ? ratio(2, 3) : 0.0;
  t.second[6] = n >= 4 ? ratio(2, 4) : 0.0;
  return t;
}

// Monte Carlo estimate of the normalised first and second moment integrals
// over a continuous T-Set, from m walk samples.
inline MomentTable moment_tables(const TSetSpec& t, const SamplerConfig& cfg, long m) {
  if (t.discrete()) return exact_permutation_moments(t.n, t.zero_diagonal());
  if (m < 10000) throw DomainError("tset", "moment tables need at least 10^4 samples");
  MomentTable out;
  out.kind = t.kind;
  out.n = t.n;
  out.seed = cfg.seed;
  out.samples = m;
  const int n = t.n;
  const double mm = static_cast<double>(m);

  if (t.heterogeneous()) {
    const int n2 = n * n;
    out.rate_ingress = t.ingress;
    out.rate_egress = t.egress;
    std::vector<double> sum(n2, 0.0), sum_sq(n2, 0.0);
    std::vector<double> outer(static_cast<std::size_t>(n2) * n2, 0.0);
    for_each_sample(t, cfg, m, [&](const TrafficMatrix& d) {
      auto v = d.data();
      for (int a = 0; a < n2; ++a) {
        const double x = v[a];
        sum[a] += x;
        sum_sq[a] += x * x;
        if (x == 0.0) continue;
        double* row = &outer[static_cast<std::size_t>(a) * n2];
        for (int b = a; b < n2; ++b) row[b] += x * v[b];
      }
    });
    out.entry_first.resize(n2);
    out.entry_first_se.resize(n2);
    for (int a = 0; a < n2; ++a) {
      out.entry_first[a] = sum[a] / mm;
      const double var = std::max(0.0, sum_sq[a] / mm - out.entry_first[a] * out.entry_first[a]);
      out.entry_first_se[a] = std::sqrt(var / mm);
    }
    out.entry_second.resize(outer.size());
    for (int a = 0; a < n2; ++a) {
      for (int b = a; b < n2; ++b) {
        const double v = outer[static_cast<std::size_t>(a) * n2 + b] / mm;
        out.entry_second[static_cast<std::size_t>(a) * n2 + b] = v;
        out.entry_second[static_cast<std::size_t>(b) * n2 + a] = v;
      }
    }
    return out;
  }

  const bool zd = t.zero_diagonal();
  const ClassValues counts = pair_class_counts(n, zd);
  const double entries = zd ? static_cast<double>(n) * (n - 1) : static_cast<double>(n) * n;
  double s1 = 0.0, s1sq = 0.0;
  ClassValues s2{}, s2sq{};
  for_each_sample(t, cfg, m, [&](const TrafficMatrix& d) {
    double tot = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!(zd && i == j)) tot += d(i, j);
    const double mean_entry = tot / entries;
    s1 += mean_entry;
    s1sq += mean_entry * mean_entry;
    const ClassValues cs = pair_class_sums(d, zd);
    for (int c : active_classes(zd)) {
      if (counts[c] == 0.0) continue;
      const double avg = cs[c] / counts[c];
      s2[c] += avg;
      s2sq[c] += avg * avg;
    }
  });
  out.first = s1 / mm;
  out.first_se = std::sqrt(std::max(0.0, s1sq / mm - out.first * out.first) / mm);
  for (int c : active_classes(zd)) {
    out.second[c] = s2[c] / mm;
    out.second_se[c] = std::sqrt(std::max(0.0, s2sq[c] / mm - out.second[c] * out.second[c]) / mm);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization and cache

inline nlohmann::json to_json(const MomentTable& t) {
  nlohmann::json j;
  j["kind"] = to_string(t.kind);
  j["n"] = t.n;
  j["seed"] = t.seed;
  j["samples"] = t.samples;
  j["exact"] = t.exact;
  if (t.heterogeneous()) {
    j["r"] = t.rate_ingress;
    j["q"] = t.rate_egress;
    j["entry_first"] = t.entry_first;
    j["entry_first_se"] = t.entry_first_se;
    j["entry_second"] = t.entry_second;
  } else {
    j["first"] = t.first;
    j["first_se"] = t.first_se;
    nlohmann::json second = nlohmann::json::object(), se = nlohmann::json::object();
    for (int c : active_classes(t.zero_diagonal())) {
      second[pair_class_name(c)] = t.second[c];
      se[pair_class_name(c)] = t.second_se[c];
    }
    j["second"] = second;
    j["second_se"] = se;
  }
  return j;
}

inline MomentTable moment_table_from_json(const nlohmann::json& j) {
  MomentTable t;
  try {
    t.kind = parse_tset_kind(j.at("kind").get<std::string>());
    t.n = j.at("n").get<int>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.samples = j.at("samples").get<long>();
    t.exact = j.value("exact", false);
    if (t.heterogeneous()) {
      t.rate_ingress = j.at("r").get<std::vector<double>>();
      t.rate_egress = j.at("q").get<std::vector<double>>();
      t.entry_first = j.at("entry_first").get<std::vector<double>>();
      t.entry_first_se = j.at("entry_first_se").get<std::vector<double>>();
      t.entry_second = j.at("entry_second").get<std::vector<double>>();
    } else {
      t.first = j.at("first").get<double>();
      t.first_se = j.at("first_se").get<double>();
      for (int c : active_classes(t.zero_diagonal())) {
        t.second[c] = j.at("second").at(pair_class_name(c)).get<double>();
        t.second_se[c] = j.at("second_se").at(pair_class_name(c)).get<double>();
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw StructuralError("tset", std::string("malformed moment table: ") + ex.what());
  }
  return t;
}

// Moment tables persisted as JSON, one file per (kind, n, seed, m). The
// directory defaults to $TPLOT_MOMENT_CACHE, else no persistence.
class MomentCache {
 public:
  explicit MomentCache(std::optional<std::filesystem::path> dir = std::nullopt) {
    if (dir) {
      dir_ = std::move(dir);
    } else if (const char* env = std::getenv("TPLOT_MOMENT_CACHE"); env && *env) {
      dir_ = std::filesystem::path(env);
    }
  }

  std::optional<std::filesystem::path> path_for(const TSetSpec& t, std::uint64_t seed, long m) const {
    if (!dir_) return std::nullopt;
    std::string name = "moments_" + to_string(t.kind) + "_n" + std::to_string(t.n) + "_seed" +
                       std::to_string(seed) + "_m" + std::to_string(m);
    if (t.heterogeneous()) {
      std::size_t h = 0;
      for (double v : t.ingress) h = h * 1000003u ^ std::hash<double>{}(v);
      for (double v : t.egress) h = h * 1000003u ^ std::hash<double>{}(v);
      name += "_r" + std::to_string(h);
    }
    return *dir_ / (name + ".json");
  }

  std::optional<MomentTable> load(const TSetSpec& t, std::uint64_t seed, long m) const {
    auto p = path_for(t, seed, m);
    if (!p || !std::filesystem::exists(*p)) return std::nullopt;
    std::ifstream in(*p);
    return moment_table_from_json(nlohmann::json::parse(in));
  }

  MomentTable get_or_compute(const TSetSpec& t, const SamplerConfig& cfg, long m) const {
    if (t.discrete()) return exact_permutation_moments(t.n, t.zero_diagonal());
    if (auto hit = load(t, cfg.seed, m)) return *hit;
    MomentTable table = moment_tables(t, cfg, m);
    if (auto p = path_for(t, cfg.seed, m)) {
      std::filesystem::create_directories(p->parent_path());
      std::ofstream(*p) << to_json(table).dump();
    }
    return table;
  }

 private:
  std::optional<std::filesystem::path> dir_;
};

}  // namespace tplot
