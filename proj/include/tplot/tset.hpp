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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tplot/error.hpp"
#include "tplot/matrix.hpp"
#include "tplot/net.hpp"
#include "tplot/rng.hpp"

namespace tplot {

// Families of traffic matrices. The _d variants force a zero diagonal.
//   P  permutation matrices          S  doubly stochastic
//   A  doubly substochastic          H  row sums <= r_i, column sums <= q_j
//   H_surface: H with equalities.
enum class TSetKind { P, Pd, S, Sd, A, Ad, H, HSurface };

inline std::string to_string(TSetKind k) {
  switch (k) {
    case TSetKind::P: return "P";
    case TSetKind::Pd: return "P_d";
    case TSetKind::S: return "S";
    case TSetKind::Sd: return "S_d";
    case TSetKind::A: return "A";
    case TSetKind::Ad: return "A_d";
    case TSetKind::H: return "H";
    case TSetKind::HSurface: return "H_surface";
  }
  return "?";
}

inline TSetKind parse_tset_kind(const std::string& s) {
  if (s == "P") return TSetKind::P;
  if (s == "P_d" || s == "Pd") return TSetKind::Pd;
  if (s == "S") return TSetKind::S;
  if (s == "S_d" || s == "Sd") return TSetKind::Sd;
  if (s == "A") return TSetKind::A;
  if (s == "A_d" || s == "Ad") return TSetKind::Ad;
  if (s == "H") return TSetKind::H;
  if (s == "H_surface" || s == "Hs") return TSetKind::HSurface;
  throw DomainError("tset", "unknown T-Set kind '" + s + "'");
}

struct TSetSpec {
  TSetKind kind = TSetKind::A;
  int n = 2;
  std::vector<double> ingress;  // r, only for H kinds
  std::vector<double> egress;   // q, only for H kinds

  TSetSpec() = default;
  TSetSpec(TSetKind k, int size) : kind(k), n(size) {
    if (n < 2) throw DomainError("tset", "T-Set dimension must be at least 2");
    if (heterogeneous()) {
      ingress.assign(n, 1.0);
      egress.assign(n, 1.0);
    }
  }
  TSetSpec(TSetKind k, std::vector<double> r, std::vector<double> q)
      : kind(k), n(static_cast<int>(r.size())), ingress(std::move(r)), egress(std::move(q)) {
    if (n < 2) throw DomainError("tset", "T-Set dimension must be at least 2");
    if (!heterogeneous()) throw DomainError("tset", "rate vectors only apply to H kinds");
    if (static_cast<int>(egress.size()) != n) throw StructuralError("tset", "r and q lengths differ");
    for (int i = 0; i < n; ++i) {
      if (!(ingress[i] > 0.0) || !(egress[i] > 0.0)) throw DomainError("tset", "H rates must be positive");
    }
    if (kind == TSetKind::HSurface) {
      double sr = 0.0, sq = 0.0;
      for (int i = 0; i < n; ++i) {
        sr += ingress[i];
        sq += egress[i];
      }
      if (std::abs(sr - sq) > 1e-9 * std::max(1.0, sr)) {
        throw DomainError("tset", "H_surface needs sum(r) == sum(q)");
      }
    }
  }

  bool zero_diagonal() const noexcept {
    return kind == TSetKind::Pd || kind == TSetKind::Sd || kind == TSetKind::Ad;
  }
  bool discrete() const noexcept { return kind == TSetKind::P || kind == TSetKind::Pd; }
  bool heterogeneous() const noexcept { return kind == TSetKind::H || kind == TSetKind::HSurface; }
  bool stochastic() const noexcept {
    return kind == TSetKind::S || kind == TSetKind::Sd || kind == TSetKind::HSurface;
  }
  double row_limit(int i) const { return heterogeneous() ? ingress[i] : 1.0; }
  double col_limit(int j) const { return heterogeneous() ? egress[j] : 1.0; }

  std::string name() const { return to_string(kind) + "(" + std::to_string(n) + ")"; }
};

// T-Set matching a network: H kinds pick up the node rate limits.
inline TSetSpec tset_for_network(TSetKind kind, const Network& net) {
  if (kind == TSetKind::H || kind == TSetKind::HSurface) {
    std::vector<double> r, q;
    for (const Node& nd : net.nodes()) {
      r.push_back(nd.ingress);
      q.push_back(nd.egress);
    }
    return TSetSpec(kind, std::move(r), std::move(q));
  }
  return TSetSpec(kind, net.node_count());
}

inline bool contains(const TSetSpec& t, const TrafficMatrix& d, double tol = 1e-9) {
  if (d.size() != t.n) throw StructuralError("tset", "matrix dimension does not match the T-Set");
  const int n = t.n;
  if (t.discrete()) {
    for (int i = 0; i < n; ++i) {
      int row_ones = 0, col_ones = 0;
      for (int j = 0; j < n; ++j) {
        const double x = d(i, j);
        if (x != 0.0 && x != 1.0) return false;
        row_ones += x == 1.0;
        col_ones += d(j, i) == 1.0;
      }
      if (row_ones != 1 || col_ones != 1) return false;
      if (t.zero_diagonal() && d(i, i) != 0.0) return false;
    }
    return true;
  }
  for (int i = 0; i < n; ++i) {
    if (t.zero_diagonal() && std::abs(d(i, i)) > tol) return false;
    for (int j = 0; j < n; ++j) {
      if (d(i, j) < -tol) return false;
    }
    const double rs = d.row_sum(i), cs = d.col_sum(i);
    if (t.stochastic()) {
      if (std::abs(rs - t.row_limit(i)) > tol || std::abs(cs - t.col_limit(i)) > tol) return false;
    } else {
      if (rs > t.row_limit(i) + tol || cs > t.col_limit(i) + tol) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Direct permutation sampling

// Uniform permutation (Fisher-Yates). With zero_diagonal, uniform derangement
// by rejection; *attempts receives the number of draws used.
inline Permutation sample_permutation(Rng& rng, int n, bool zero_diagonal, long* attempts = nullptr) {
  Permutation sigma(n);
  long tries = 0;
  for (;;) {
    ++tries;
    for (int i = 0; i < n; ++i) sigma[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(sigma[i], sigma[rng.below(i + 1)]);
    if (!zero_diagonal) break;
    bool fixed_point = false;
    for (int i = 0; i < n && !fixed_point; ++i) fixed_point = sigma[i] == i;
    if (!fixed_point) break;
  }
  if (attempts) *attempts = tries;
  return sigma;
}

// ---------------------------------------------------------------------------
// Random walks

// kBall moves every free entry at once (Gaussian ball walk); kCoordinate moves
// one entry per proposal. Stochastic kinds always use cycle moves.
enum class Proposal { kCoordinate, kBall };

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::optional<long> burn_in;      // sweeps; default 10 n^2
  std::optional<long> thinning;     // sweeps between kept samples; default n
  std::optional<double> step_scale; // SD of a walk increment; default sqrt(1/(2n))
  Proposal proposal = Proposal::kCoordinate;

  long burn_in_for(int n) const { return burn_in.value_or(10L * n * n); }
  long thinning_for(int n) const { return thinning.value_or(n); }
  double step_for(int n) const { return step_scale.value_or(std::sqrt(1.0 / (2.0 * n))); }

  void check() const {
    if (burn_in && *burn_in < 0) throw DomainError("tset", "burn_in must be >= 0");
    if (thinning && *thinning < 1) throw DomainError("tset", "thinning must be >= 1");
    if (step_scale && !(*step_scale > 0.0)) throw DomainError("tset", "step_scale must be > 0");
  }
};

// A matrix inside the T-Set to start walks from.
inline TrafficMatrix default_start(const TSetSpec& t) {
  const int n = t.n;
  TrafficMatrix d(n);
  switch (t.kind) {
    case TSetKind::P:
      return SquareMatrix::identity(n);
    case TSetKind::Pd: {
      Permutation shift(n);
      for (int i = 0; i < n; ++i) shift[i] = (i + 1) % n;
      return permutation_matrix(shift);
    }
    case TSetKind::S:
      return TrafficMatrix(n, 1.0 / n);
    case TSetKind::Sd:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i, j) = i == j ? 0.0 : 1.0 / (n - 1);
      return d;
    case TSetKind::HSurface: {
      double total = 0.0;
      for (double q : t.egress) total += q;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i, j) = t.ingress[i] * t.egress[j] / total;
      return d;
    }
    default:
      return d;  // zero matrix for A, A_d, H
  }
}

// One proposal of the walk for T-Set t, in place. Returns true if accepted
// (the matrix is unchanged on rejection). The row/col sums are only needed
// for coordinate moves and are kept in sync when supplied.
class WalkKernel {
 public:
  explicit WalkKernel(const TSetSpec& t, double step) : t_(t), step_(step) {
    if (t.discrete()) throw DomainError("tset", "discrete T-Sets are sampled directly, not walked");
    mean_rate_ = 0.0;
    for (int i = 0; i < t.n; ++i) mean_rate_ += t.row_limit(i);
    mean_rate_ /= t.n;
  }

  void reset_sums(const TrafficMatrix& d) {
    rows_.assign(t_.n, 0.0);
    cols_.assign(t_.n, 0.0);
    for (int i = 0; i < t_.n; ++i) {
      rows_[i] = d.row_sum(i);
      cols_[i] = d.col_sum(i);
    }
  }

  bool step(Rng& rng, TrafficMatrix& d, Proposal proposal) {
    if (t_.stochastic()) return cycle_move(rng, d);
    if (proposal == Proposal::kBall) return ball_move(rng, d);
    return coordinate_move(rng, d);
  }

  // Number of proposals making up one sweep.
  long sweep_length(Proposal proposal) const {
    if (!t_.stochastic() && proposal == Proposal::kBall) return 1;
    return static_cast<long>(t_.n) * t_.n;
  }

 private:
  double entry_scale(int i, int j) const {
    return t_.heterogeneous() ? step_ * std::min(t_.row_limit(i), t_.col_limit(j)) : step_;
  }

  bool coordinate_move(Rng& rng, TrafficMatrix& d) {
    const int n = t_.n;
    int i, j;
    do {
      i = rng.below(n);
      j = rng.below(n);
    } while (t_.zero_diagonal() && i == j);
    const double delta = entry_scale(i, j) * rng.normal();
    const double x = d(i, j) + delta;
    if (x < 0.0) return false;
    const double r = rows_[i] + delta, c = cols_[j] + delta;
    if (r > t_.row_limit(i) || c > t_.col_limit(j)) return false;
    d(i, j) = x;
    rows_[i] = r;
    cols_[j] = c;
    return true;
  }

  bool ball_move(Rng& rng, TrafficMatrix& d) {
    const int n = t_.n;
    TrafficMatrix next = d;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (t_.zero_diagonal() && i == j) continue;
        next(i, j) += entry_scale(i, j) * rng.normal();
        if (next(i, j) < 0.0) return false;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (next.row_sum(i) > t_.row_limit(i) || next.col_sum(i) > t_.col_limit(i)) return false;
    }
    d = std::move(next);
    reset_sums(d);
    return true;
  }

  // Alternating +/- delta around a 4-cycle (rows i1,i2 x cols j1,j2), or for
  // zero-diagonal sets half the time around a 6-cycle: with n = 3 no 4-cycle
  // avoids the diagonal. Row and column sums are untouched.
  bool cycle_move(Rng& rng, TrafficMatrix& d) {
    const int n = t_.n;
    const double delta = step_ * mean_rate_ * rng.normal();
    const bool six = t_.zero_diagonal() && (n == 3 || (n > 3 && rng.below(2) == 1));
    int len = six ? 3 : 2;
    int rows[3], cols[3];
    for (int k = 0; k < len; ++k) {
      rows[k] = rng.below(n);
      cols[k] = rng.below(n);
    }
    // Need distinct rows and distinct columns, otherwise the move is a no-op.
    for (int a = 0; a < len; ++a) {
      for (int b = a + 1; b < len; ++b) {
        if (rows[a] == rows[b] || cols[a] == cols[b]) return false;
      }
    }
    // minus cells (rows[k], cols[k]); plus cells (rows[k], cols[k+1 mod len])
    for (int k = 0; k < len; ++k) {
      const int pi = rows[k], pj = cols[(k + 1) % len];
      const int mi = rows[k], mj = cols[k];
      if (t_.zero_diagonal() && (pi == pj || mi == mj)) return false;
      if (d(mi, mj) - delta < 0.0 || d(pi, pj) + delta < 0.0) return false;
    }
    for (int k = 0; k < len; ++k) {
      d(rows[k], cols[k]) -= delta;
      d(rows[k], cols[(k + 1) % len]) += delta;
    }
    return true;
  }

  TSetSpec t_;
  double step_;
  double mean_rate_ = 1.0;
  std::vector<double> rows_, cols_;
};

// Single walk proposal for a continuous T-Set: returns the next matrix
// (equal to d on rejection).
inline TrafficMatrix walk_step(const TSetSpec& t, Rng& rng, const TrafficMatrix& d, const SamplerConfig& cfg) {
  WalkKernel kernel(t, cfg.step_for(t.n));
  kernel.reset_sums(d);
  TrafficMatrix next = d;
  kernel.step(rng, next, cfg.proposal);
  return next;
}

// Stream of samples from a T-Set. Permutation kinds are drawn i.i.d.;
// continuous kinds come from a walk with burn-in and thinning.
class Sampler {
 public:
  Sampler(const TSetSpec& t, const SamplerConfig& cfg, std::optional<TrafficMatrix> start = std::nullopt)
      : t_(t), cfg_(cfg), rng_(cfg.seed) {
    cfg.check();
    if (t.discrete()) return;
    kernel_.emplace(t, cfg.step_for(t.n));
    current_ = start ? *start : default_start(t);
    if (!contains(t, current_)) throw DomainError("tset", "walk start matrix is outside " + t.name());
    kernel_->reset_sums(current_);
    advance(cfg.burn_in_for(t.n));
  }

  const TSetSpec& tset() const noexcept { return t_; }

  // Next permutation (discrete kinds only).
  const Permutation& next_permutation() {
    perm_ = sample_permutation(rng_, t_.n, t_.zero_diagonal(), &last_attempts_);
    draws_ += last_attempts_;
    ++emitted_;
    return perm_;
  }

  // Next sample as a matrix (any kind).
  const TrafficMatrix& next() {
    if (t_.discrete()) {
      current_ = permutation_matrix(next_permutation());
      return current_;
    }
    advance(cfg_.thinning_for(t_.n));
    kernel_->reset_sums(current_);  // drop accumulated rounding in the sums
    ++emitted_;
    return current_;
  }

  long proposals() const noexcept { return proposals_; }
  long accepted() const noexcept { return accepted_; }
  long emitted() const noexcept { return emitted_; }
  // For derangements: total permutation draws including rejections.
  long permutation_draws() const noexcept { return draws_; }

 private:
  void advance(long sweeps) {
    const long steps = sweeps * kernel_->sweep_length(cfg_.proposal);
    for (long s = 0; s < steps; ++s) {
      ++proposals_;
      accepted_ += kernel_->step(rng_, current_, cfg_.proposal);
    }
  }

  TSetSpec t_;
  SamplerConfig cfg_;
  Rng rng_;
  std::optional<WalkKernel> kernel_;
  TrafficMatrix current_;
  Permutation perm_;
  long last_attempts_ = 0, draws_ = 0;
  long proposals_ = 0, accepted_ = 0, emitted_ = 0;
};

// Calls fn(matrix) for m samples. Deterministic for a fixed config.
template <typename Fn>
void for_each_sample(const TSetSpec& t, const SamplerConfig& cfg, long m, Fn&& fn) {
  if (m < 1) throw DomainError("tset", "sample count must be >= 1");
  Sampler sampler(t, cfg);
  for (long k = 0; k < m; ++k) fn(sampler.next());
}

inline std::vector<TrafficMatrix> sample_stream(const TSetSpec& t, const SamplerConfig& cfg, long m) {
  std::vector<TrafficMatrix> out;
  out.reserve(static_cast<std::size_t>(m));
  for_each_sample(t, cfg, m, [&](const TrafficMatrix& d) { out.push_back(d); });
  return out;
}

// ---------------------------------------------------------------------------
// Convergence diagnostics

// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
inline double sup_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(i / na - j / nb));
  }
  return best;
}

struct ConvergenceOptions {
  std::vector<long> sample_counts = {100, 1000, 10000, 100000};
  int repetitions = 50;
  long two_start_samples = 100000;
  std::optional<TrafficMatrix> start_a;  // default: the kind's default start
  std::optional<TrafficMatrix> start_b;  // default: a permutation matrix (for A/A_d/H)
};

struct ConvergenceReport {
  std::vector<long> sample_counts;
  std::vector<double> variance;   // empirical var of the bin estimate across repetitions
  std::vector<double> predicted;  // p(1-p)/m with p pooled at the largest m
  double p = 0.0;
  double sup_distance = 0.0;      // statistic CDFs from two different start matrices
};

// Checks that the bin-frequency estimator's variance shrinks like p(1-p)/m
// and that the statistic's distribution does not depend on the start matrix.
inline ConvergenceReport convergence_diagnostics(const TSetSpec& t, const SamplerConfig& cfg,
                                                 const std::function<bool(const TrafficMatrix&)>& in_bin,
                                                 const std::function<double(const TrafficMatrix&)>& statistic,
                                                 const ConvergenceOptions& opt = {}) {
  if (t.discrete()) throw DomainError("tset", "convergence diagnostics apply to walk T-Sets");
  if (opt.repetitions < 2) throw DomainError("tset", "need at least two repetitions");
  ConvergenceReport rep;
  rep.sample_counts = opt.sample_counts;
  std::sort(rep.sample_counts.begin(), rep.sample_counts.end());
  const long m_max = rep.sample_counts.back();
  const std::size_t k = rep.sample_counts.size();
  std::vector<std::vector<double>> estimates(k);
  double pooled = 0.0;
  for (int r = 0; r < opt.repetitions; ++r) {
    SamplerConfig c = cfg;
    c.seed = chain_seed(cfg.seed, static_cast<std::uint64_t>(r));
    Sampler s(t, c);
    long hits = 0;
    std::size_t next_mark = 0;
    for (long i = 1; i <= m_max; ++i) {
      hits += in_bin(s.next());
      if (i == rep.sample_counts[next_mark]) {
        estimates[next_mark].push_back(static_cast<double>(hits) / i);
        ++next_mark;
      }
    }
    pooled += static_cast<double>(hits) / m_max;
  }
  rep.p = pooled / opt.repetitions;
  for (std::size_t q = 0; q < k; ++q) {
    const auto& e = estimates[q];
    double mean = 0.0;
    for (double x : e) mean += x;
    mean /= e.size();
    double var = 0.0;
    for (double x : e) var += (x - mean) * (x - mean);
    rep.variance.push_back(var / (e.size() - 1));
    rep.predicted.push_back(rep.p * (1.0 - rep.p) / rep.sample_counts[q]);
  }

  TrafficMatrix start_a = opt.start_a ? *opt.start_a : default_start(t);
  TrafficMatrix start_b;
  if (opt.start_b) {
    start_b = *opt.start_b;
  } else if (t.stochastic()) {
    start_b = default_start(t);
  } else {
    // Scaled shifted permutation: a vertex-like corner far from the zero matrix.
    Permutation shift(t.n);
    for (int i = 0; i < t.n; ++i) shift[i] = (i + 1) % t.n;
    start_b = permutation_matrix(shift);
    for (int i = 0; i < t.n; ++i) start_b(i, shift[i]) = std::min(t.row_limit(i), t.col_limit(shift[i]));
  }
  std::vector<double> xa, xb;
  SamplerConfig ca = cfg, cb = cfg;
  ca.seed = chain_seed(cfg.seed, 1u << 20);
  cb.seed = chain_seed(cfg.seed, (1u << 20) + 1);
  Sampler sa(t, ca, start_a), sb(t, cb, start_b);
  for (long i = 0; i < opt.two_start_samples; ++i) {
    xa.push_back(statistic(sa.next()));
    xb.push_back(statistic(sb.next()));
  }
  rep.sup_distance = sup_distance(std::move(xa), std::move(xb));
  return rep;
}

}  // namespace tplot
