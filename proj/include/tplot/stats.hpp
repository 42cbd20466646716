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
#include <cstdint>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tplot/error.hpp"
#include "tplot/moments.hpp"
#include "tplot/net.hpp"
#include "tplot/tset.hpp"

namespace tplot {

// ---------------------------------------------------------------------------
// T-Plot

enum class TargetKind { kEdge, kGlobal, kThroughput };

struct Target {
  TargetKind kind = TargetKind::kGlobal;
  int edge = -1;

  static Target edge_load(int e) { return {TargetKind::kEdge, e}; }
  static Target global() { return {TargetKind::kGlobal, -1}; }
  static Target throughput() { return {TargetKind::kThroughput, -1}; }

  std::string label(const Network* net = nullptr) const {
    switch (kind) {
      case TargetKind::kEdge: return "edge:" + (net ? net->edge(edge).id : std::to_string(edge));
      case TargetKind::kGlobal: return "global";
      case TargetKind::kThroughput: return "throughput";
    }
    return "?";
  }
};

struct Bin {
  double lower = 0.0;
  double upper = 0.0;
  long count = 0;
};

struct Atom {
  double value = 0.0;
  long count = 0;
};

// Distribution of a congestion statistic over a T-Set. Sampled plots carry
// bins and, when the sample took few distinct values, the exact atoms too.
// Exact plots (full enumeration) carry atoms only.
struct TPlot {
  Target target;
  TSetSpec tset;
  std::vector<Bin> bins;
  std::vector<Atom> atoms;  // sorted by value
  long total = 0;
  bool exact = false;
  std::uint64_t seed = 0;
  std::string provenance;

  bool has_atoms() const noexcept { return !atoms.empty(); }

  // Pr{X <= x}
  double cdf(double x) const {
    if (total == 0) return 0.0;
    const double eps = 1e-12 * std::max(1.0, std::abs(x));
    if (has_atoms()) {
      long c = 0;
      for (const Atom& a : atoms) {
        if (a.value <= x + eps) c += a.count;
      }
      return static_cast<double>(c) / total;
    }
    double c = 0.0;
    for (const Bin& b : bins) {
      if (b.upper <= x + eps) {
        c += b.count;
      } else if (b.lower <= x) {
        c += b.count * (x - b.lower) / (b.upper - b.lower);
      }
    }
    return std::min(1.0, c / total);
  }

  // Pr{X >= x}
  double ccdf(double x) const {
    if (total == 0) return 0.0;
    if (has_atoms()) {
      const double eps = 1e-12 * std::max(1.0, std::abs(x));
      long c = 0;
      for (const Atom& a : atoms) {
        if (a.value >= x - eps) c += a.count;
      }
      return static_cast<double>(c) / total;
    }
    return 1.0 - cdf(x);
  }

  // Probability mass of the atom at x (0 if none).
  double mass_at(double x) const {
    const double eps = 1e-9 * std::max(1.0, std::abs(x));
    long c = 0;
    for (const Atom& a : atoms) {
      if (std::abs(a.value - x) <= eps) c += a.count;
    }
    return total ? static_cast<double>(c) / total : 0.0;
  }

  // Normalised bin masses.
  std::vector<double> pdf() const {
    std::vector<double> p;
    for (const Bin& b : bins) p.push_back(total ? static_cast<double>(b.count) / total : 0.0);
    return p;
  }

  // Histogram merge; both plots must share the same bin edges.
  TPlot& merge(const TPlot& other) {
    if (other.bins.size() != bins.size()) throw StructuralError("stats", "cannot merge plots with different bins");
    for (std::size_t k = 0; k < bins.size(); ++k) {
      if (bins[k].lower != other.bins[k].lower || bins[k].upper != other.bins[k].upper) {
        throw StructuralError("stats", "cannot merge plots with different bins");
      }
      bins[k].count += other.bins[k].count;
    }
    // Atoms survive only if both sides kept them.
    if (has_atoms() && other.has_atoms()) {
      std::map<double, long> m;
      for (const Atom& a : atoms) m[a.value] += a.count;
      for (const Atom& a : other.atoms) m[a.value] += a.count;
      atoms.clear();
      for (auto [v, c] : m) atoms.push_back({v, c});
    } else {
      atoms.clear();
    }
    total += other.total;
    exact = false;
    return *this;
  }
};

inline constexpr int kDefaultBins = 100;
inline constexpr std::size_t kMaxTrackedAtoms = 4096;

// Histogram of values over [lo, hi] with `bins` equal-width bins. Values
// outside the range are clamped into the end bins. Distinct values are kept
// as atoms while there are at most kMaxTrackedAtoms of them.
inline TPlot histogram(const std::vector<double>& values, double lo, double hi, int bins) {
  if (bins < 1) throw DomainError("stats", "bin count must be >= 1");
  TPlot tp;
  if (!(hi > lo)) {
    // Degenerate range: one narrow bin.
    hi = lo + 1e-9 * std::max(1.0, std::abs(lo));
    bins = 1;
  }
  const double width = (hi - lo) / bins;
  tp.bins.resize(bins);
  for (int k = 0; k < bins; ++k) {
    tp.bins[k].lower = lo + k * width;
    tp.bins[k].upper = k + 1 == bins ? hi : lo + (k + 1) * width;
  }
  std::map<double, long> distinct;
  bool track = true;
  for (double x : values) {
    int k = static_cast<int>(std::floor((x - lo) / width));
    k = std::clamp(k, 0, bins - 1);
    ++tp.bins[k].count;
    if (track) {
      ++distinct[x];
      if (distinct.size() > kMaxTrackedAtoms) {
        track = false;
        distinct.clear();
      }
    }
  }
  for (auto [v, c] : distinct) tp.atoms.push_back({v, c});
  tp.total = static_cast<long>(values.size());
  return tp;
}

// Values of the target statistic for m samples of the T-Set.
inline std::vector<double> sample_values(const Network& net, const Routing& f, const TSetSpec& tset,
                                         const Target& target, long m, const SamplerConfig& cfg) {
  if (tset.n != net.node_count()) throw StructuralError("stats", "T-Set dimension does not match the network");
  if (target.kind == TargetKind::kEdge && (target.edge < 0 || target.edge >= net.edge_count())) {
    throw StructuralError("stats", "edge index out of range");
  }
  const LoadEvaluator eval(net, f);
  auto value_of = [&](const auto& demand) {
    switch (target.kind) {
      case TargetKind::kEdge: return eval.congestion(target.edge, demand);
      case TargetKind::kGlobal: return eval.global(demand);
      case TargetKind::kThroughput: return throughput_from_congestion(eval.global(demand));
    }
    return 0.0;
  };
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(m));
  Sampler sampler(tset, cfg);
  for (long k = 0; k < m; ++k) {
    if (tset.discrete()) {
      values.push_back(value_of(sampler.next_permutation()));
    } else {
      values.push_back(value_of(sampler.next()));
    }
  }
  return values;
}

// Samples drawn by `chains` independent chains (seeds derived with
// chain_seed), concatenated in chain order.
inline std::vector<double> sample_values_chains(const Network& net, const Routing& f, const TSetSpec& tset,
                                                const Target& target, long m, const SamplerConfig& cfg,
                                                int chains) {
  if (chains < 1) throw DomainError("stats", "chain count must be >= 1");
  if (chains == 1) return sample_values(net, f, tset, target, m, cfg);
  std::vector<std::future<std::vector<double>>> parts;
  for (int c = 0; c < chains; ++c) {
    const long mc = m / chains + (c < m % chains ? 1 : 0);
    SamplerConfig cc = cfg;
    cc.seed = chain_seed(cfg.seed, static_cast<std::uint64_t>(c));
    parts.push_back(std::async(std::launch::async, [&, mc, cc] {
      return mc > 0 ? sample_values(net, f, tset, target, mc, cc) : std::vector<double>{};
    }));
  }
  std::vector<double> out;
  for (auto& p : parts) {
    auto v = p.get();
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

// Natural value range of the target: [0, worst case] when the worst case is
// computable (homogeneous network), [0, 1] for throughput, else the data range.
inline std::pair<double, double> target_range(const Network& net, const Routing& f, const Target& target,
                                              const std::vector<double>& values) {
  if (target.kind == TargetKind::kThroughput) return {0.0, 1.0};
  if (net.homogeneous()) {
    if (target.kind == TargetKind::kEdge) return {0.0, worst_case_edge_congestion(net, f, target.edge)};
    double w = 0.0;
    for (int e = 0; e < net.edge_count(); ++e) w = std::max(w, worst_case_edge_congestion(net, f, e));
    return {0.0, w};
  }
  if (values.empty()) return {0.0, 0.0};
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  return {*mn, *mx};
}

struct BuildOptions {
  int bins = kDefaultBins;
  int chains = 1;
  std::optional<std::pair<double, double>> range;
};

inline TPlot tplot_from_values(const Network& net, const Routing& f, const TSetSpec& tset, const Target& target,
                               const std::vector<double>& values, const SamplerConfig& cfg,
                               const BuildOptions& opt = {}) {
  auto [lo, hi] = opt.range ? *opt.range : target_range(net, f, target, values);
  // All-equal samples collapse to one bin at that value.
  if (!values.empty() && std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    lo = values[0];
    hi = values[0];
  }
  TPlot tp = histogram(values, lo, hi, opt.bins);
  tp.target = target;
  tp.tset = tset;
  tp.seed = cfg.seed;
  std::ostringstream prov;
  prov << "sampled " << tset.name() << " m=" << values.size() << " seed=" << cfg.seed << " chains=" << opt.chains;
  tp.provenance = prov.str();
  return tp;
}

// Monte Carlo T-Plot of the target over m samples of the T-Set.
inline TPlot build_tplot(const Network& net, const Routing& f, const TSetSpec& tset, const Target& target, long m,
                         const SamplerConfig& cfg, const BuildOptions& opt = {}) {
  if (m < 1) throw DomainError("stats", "sample count must be >= 1");
  const auto values = sample_values_chains(net, f, tset, target, m, cfg, opt.chains);
  return tplot_from_values(net, f, tset, target, values, cfg, opt);
}

// ---------------------------------------------------------------------------
// Exact enumeration over permutations

inline constexpr int kDefaultEnumerationLimit = 8;
inline constexpr int kLongRunEnumerationLimit = 11;

namespace detail {

inline double atom_key(double v) { return std::round(v * 1e12) / 1e12; }

// Depth-first enumeration of all permutations (or derangements) with partial
// edge flows maintained incrementally. Calls leaf(flows) at each leaf.
template <typename Leaf>
void enumerate_permutations(const Routing& f, bool zero_diagonal, Leaf&& leaf) {
  const int n = f.node_count();
  const int ne = f.edge_count();
  std::vector<std::vector<double>> partial(n + 1, std::vector<double>(ne, 0.0));
  std::vector<char> used(n, 0);
  Permutation sigma(n);
  auto rec = [&](auto&& self, int row) -> void {
    if (row == n) {
      leaf(partial[n], sigma);
      return;
    }
    for (int col = 0; col < n; ++col) {
      if (used[col] || (zero_diagonal && col == row)) continue;
      used[col] = 1;
      sigma[row] = col;
      for (int e = 0; e < ne; ++e) partial[row + 1][e] = partial[row][e] + f.edge_flows(e)(row, col);
      self(self, row + 1);
      used[col] = 0;
    }
  };
  rec(rec, 0);
}

}  // namespace detail

// Exact T-Plot over every permutation (or derangement) by full enumeration.
inline TPlot exact_tplot_permutations(const Network& net, const Routing& f, const Target& target,
                                      bool zero_diagonal, int limit = kDefaultEnumerationLimit) {
  const int n = net.node_count();
  if (n > limit) {
    throw UnsupportedError("stats", "exact enumeration of " + std::to_string(n) + "! permutations exceeds the limit n <= " +
                                        std::to_string(limit) + " (pass the long-run override)");
  }
  if (f.node_count() != n || f.edge_count() != net.edge_count()) {
    throw StructuralError("stats", "routing dimensions do not match the network");
  }
  std::vector<double> inv_cap;
  for (const Edge& e : net.edges()) inv_cap.push_back(1.0 / e.capacity);
  std::map<double, long> atoms;
  long total = 0;
  detail::enumerate_permutations(f, zero_diagonal, [&](const std::vector<double>& flows, const Permutation&) {
    double v = 0.0;
    if (target.kind == TargetKind::kEdge) {
      v = flows[target.edge] * inv_cap[target.edge];
    } else {
      for (std::size_t e = 0; e < flows.size(); ++e) v = std::max(v, flows[e] * inv_cap[e]);
      if (target.kind == TargetKind::kThroughput) v = throughput_from_congestion(v);
    }
    ++atoms[detail::atom_key(v)];
    ++total;
  });
  TPlot tp;
  tp.target = target;
  tp.tset = TSetSpec(zero_diagonal ? TSetKind::Pd : TSetKind::P, n);
  tp.exact = true;
  tp.total = total;
  for (auto [v, c] : atoms) tp.atoms.push_back({v, c});
  tp.provenance = "exact enumeration over " + tp.tset.name();
  return tp;
}

// ---------------------------------------------------------------------------
// Gaussian parameters

enum class GaussianMethod { kClosedFormP, kClosedFormPd, kSemiAnalyticS, kMcMomentsA, kMcMomentsH, kEmpirical };

inline std::string to_string(GaussianMethod m) {
  switch (m) {
    case GaussianMethod::kClosedFormP: return "closed-form-P";
    case GaussianMethod::kClosedFormPd: return "closed-form-Pd";
    case GaussianMethod::kSemiAnalyticS: return "semi-analytic-S";
    case GaussianMethod::kMcMomentsA: return "mc-moments-A";
    case GaussianMethod::kMcMomentsH: return "mc-moments-H";
    case GaussianMethod::kEmpirical: return "empirical";
  }
  return "?";
}

struct GaussianParams {
  double mu = 0.0;
  double sigma = 0.0;
  GaussianMethod method = GaussianMethod::kEmpirical;

  double variance() const { return sigma * sigma; }
};

// First and second moment of sum_ij x_ij D_ij under a moment table.
inline std::pair<double, double> linear_form_moments(const SquareMatrix& x, const MomentTable& table) {
  const int n = x.size();
  if (table.n != n) throw StructuralError("stats", "moment table dimension does not match");
  if (table.heterogeneous()) {
    const int n2 = n * n;
    auto v = x.data();
    double m1 = 0.0, m2 = 0.0;
    for (int a = 0; a < n2; ++a) {
      if (v[a] == 0.0) continue;
      m1 += v[a] * table.entry_first[a];
      for (int b = 0; b < n2; ++b) {
        if (v[b] != 0.0) m2 += v[a] * v[b] * table.entry_second_moment(a, b);
      }
    }
    return {m1, m2};
  }
  const bool zd = table.zero_diagonal();
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(zd && i == j)) sum += x(i, j);
  const ClassValues s = pair_class_sums(x, zd);
  double m2 = 0.0;
  for (int c : active_classes(zd)) m2 += table.second[c] * s[c];
  return {table.first * sum, m2};
}

// (mu, sigma) of the load on edge e over the T-Set. Permutation kinds use
// exact counting; continuous kinds need a moment table for their (kind, n).
inline GaussianParams gaussian_params(const Network& net, const Routing& f, int e, const TSetSpec& tset,
                                      const MomentTable* table = nullptr) {
  if (tset.n != net.node_count()) throw StructuralError("stats", "T-Set dimension does not match the network");
  const double c = net.edge(e).capacity;
  const SquareMatrix& fe = f.edge_flows(e);
  MomentTable exact;
  GaussianMethod method;
  switch (tset.kind) {
    case TSetKind::P:
    case TSetKind::Pd:
      exact = exact_permutation_moments(tset.n, tset.zero_diagonal());
      table = &exact;
      method = tset.kind == TSetKind::P ? GaussianMethod::kClosedFormP : GaussianMethod::kClosedFormPd;
      break;
    case TSetKind::S:
    case TSetKind::Sd:
      method = GaussianMethod::kSemiAnalyticS;
      break;
    case TSetKind::A:
    case TSetKind::Ad:
      method = GaussianMethod::kMcMomentsA;
      break;
    default:
      method = GaussianMethod::kMcMomentsH;
  }
  if (!table) {
    throw DomainError("stats", "no moment table for " + tset.name() +
                                   "; precompute one with moment_tables (CLI: gaussian-params --moment-samples)");
  }
  if (table->kind != tset.kind || table->n != tset.n) {
    throw StructuralError("stats", "moment table is for " + to_string(table->kind) + "(" + std::to_string(table->n) +
                                       "), expected " + tset.name());
  }
  auto [m1, m2] = linear_form_moments(fe, *table);
  if (tset.kind == TSetKind::S || tset.kind == TSetKind::Sd) {
    // Entries of S (S_d) have mean exactly 1/n (1/(n-1)).
    double sum = 0.0;
    for (int i = 0; i < tset.n; ++i)
      for (int j = 0; j < tset.n; ++j)
        if (!(tset.zero_diagonal() && i == j)) sum += fe(i, j);
    m1 = sum / (tset.kind == TSetKind::S ? tset.n : tset.n - 1);
  }
  GaussianParams g;
  g.mu = m1 / c;
  g.sigma = std::sqrt(std::max(0.0, m2 / (c * c) - g.mu * g.mu));
  g.method = method;
  return g;
}

inline GaussianParams empirical_params(const std::vector<double>& values) {
  if (values.empty()) throw DomainError("stats", "no samples");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  return {mean, std::sqrt(var), GaussianMethod::kEmpirical};
}

// ---------------------------------------------------------------------------
// Summary statistics

struct TPlotSummary {
  double mean = 0.0;
  double variance = 0.0;
  double worst = 0.0;  // largest observed value (upper edge of last occupied bin)
};

inline TPlotSummary tplot_stats(const TPlot& tp) {
  if (tp.total < 1) throw DomainError("stats", "empty T-Plot");
  TPlotSummary s;
  const double n = static_cast<double>(tp.total);
  if (tp.has_atoms()) {
    for (const Atom& a : tp.atoms) s.mean += a.value * a.count;
    s.mean /= n;
    for (const Atom& a : tp.atoms) s.variance += (a.value - s.mean) * (a.value - s.mean) * a.count;
    s.variance /= n;
    s.worst = tp.atoms.back().value;
    return s;
  }
  for (const Bin& b : tp.bins) s.mean += 0.5 * (b.lower + b.upper) * b.count;
  s.mean /= n;
  for (const Bin& b : tp.bins) {
    const double mid = 0.5 * (b.lower + b.upper);
    s.variance += (mid - s.mean) * (mid - s.mean) * b.count;
    if (b.count > 0) s.worst = b.upper;
  }
  s.variance /= n;
  return s;
}

// Smallest value v (atom, or bin upper edge) with CDF(v) >= q.
inline double tplot_quantile(const TPlot& tp, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("stats", "quantile level must be in [0, 1]");
  if (tp.total < 1) throw DomainError("stats", "empty T-Plot");
  const double need = q * tp.total;
  long acc = 0;
  if (tp.has_atoms()) {
    for (const Atom& a : tp.atoms) {
      acc += a.count;
      if (acc >= need - 1e-9) return a.value;
    }
    return tp.atoms.back().value;
  }
  for (const Bin& b : tp.bins) {
    acc += b.count;
    if (acc >= need - 1e-9) return b.upper;
  }
  return tp.bins.back().upper;
}

// Throughput plot from a global-congestion plot: each GC value x maps to
// min(1/x, 1). Query it with ccdf(t) = Pr{TP >= t}. Bins map conservatively
// through their upper GC edge.
inline TPlot throughput_ccdf(const TPlot& gc) {
  if (gc.target.kind != TargetKind::kGlobal) throw DomainError("stats", "throughput view needs a global-congestion plot");
  TPlot tp;
  tp.target = Target::throughput();
  tp.tset = gc.tset;
  tp.total = gc.total;
  tp.exact = gc.exact;
  tp.seed = gc.seed;
  tp.provenance = gc.provenance + " -> throughput";
  std::map<double, long> atoms;
  if (gc.has_atoms()) {
    for (const Atom& a : gc.atoms) atoms[throughput_from_congestion(a.value)] += a.count;
  } else {
    for (const Bin& b : gc.bins) {
      if (b.count > 0) atoms[throughput_from_congestion(b.upper)] += b.count;
    }
  }
  for (auto [v, c] : atoms) tp.atoms.push_back({v, c});
  return tp;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const TPlot& tp, const Network* net = nullptr) {
  nlohmann::json j;
  j["target"] = tp.target.label(net);
  j["tset"] = to_string(tp.tset.kind);
  j["n"] = tp.tset.n;
  j["total"] = tp.total;
  j["exact"] = tp.exact;
  j["seed"] = tp.seed;
  j["provenance"] = tp.provenance;
  j["bins"] = nlohmann::json::array();
  for (const Bin& b : tp.bins) j["bins"].push_back({b.lower, b.upper, b.count});
  j["atoms"] = nlohmann::json::array();
  for (const Atom& a : tp.atoms) j["atoms"].push_back({a.value, a.count});
  return j;
}

// CSV rows: bin_lower,bin_upper,count,pdf,cdf. Exact plots emit one row per
// atom with bin_lower == bin_upper == value.
inline void write_csv(std::ostream& out, const TPlot& tp) {
  out << "bin_lower,bin_upper,count,pdf,cdf\n";
  std::ostringstream s;
  s.precision(17);
  long acc = 0;
  const double n = static_cast<double>(std::max(1L, tp.total));
  if (tp.exact || tp.bins.empty()) {
    for (const Atom& a : tp.atoms) {
      acc += a.count;
      s << a.value << ',' << a.value << ',' << a.count << ',' << a.count / n << ',' << acc / n << '\n';
    }
  } else {
    for (const Bin& b : tp.bins) {
      acc += b.count;
      s << b.lower << ',' << b.upper << ',' << b.count << ',' << b.count / n << ',' << acc / n << '\n';
    }
  }
  out << s.str();
}

// Reads the rows written by write_csv back into bins (or atoms when every
// row has bin_lower == bin_upper). Leading '#' lines are skipped; target and
// T-Set metadata are not part of the CSV and stay default.
inline TPlot read_csv(std::istream& in) {
  TPlot tp;
  std::string line;
  while (std::getline(in, line) && !line.empty() && line[0] == '#') {
  }
  if (line.rfind("bin_lower,bin_upper,count", 0) != 0) {
    throw StructuralError("stats", "missing T-Plot CSV header");
  }
  bool point_rows = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    Bin b;
    char c1 = 0, c2 = 0;
    if (!(row >> b.lower >> c1 >> b.upper >> c2 >> b.count) || c1 != ',' || c2 != ',') {
      throw StructuralError("stats", "malformed T-Plot CSV row: " + line);
    }
    point_rows = point_rows && b.lower == b.upper;
    tp.bins.push_back(b);
    tp.total += b.count;
  }
  if (point_rows) {
    for (const Bin& b : tp.bins) tp.atoms.push_back({b.lower, b.count});
    tp.bins.clear();
    tp.exact = true;
  }
  return tp;
}

}  // namespace tplot
