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
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tplot/bounds.hpp"
#include "tplot/error.hpp"
#include "tplot/net.hpp"
#include "tplot/normal.hpp"
#include "tplot/rng.hpp"
#include "tplot/stats.hpp"

namespace tplot {

struct CapacityAllocation {
  std::vector<double> capacities;  // per edge, > 0
  std::optional<double> k;         // set for mu + k sigma allocations
  double budget = 0.0;

  double sum() const { return std::accumulate(capacities.begin(), capacities.end(), 0.0); }
};

inline double sum_of(const std::vector<GaussianParams>& p, double GaussianParams::*field) {
  double s = 0.0;
  for (const auto& g : p) s += g.*field;
  return s;
}

inline void require_positive(const std::vector<double>& caps) {
  std::string bad;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (!(caps[i] > 0.0)) bad += (bad.empty() ? "" : ", ") + std::to_string(i);
  }
  if (!bad.empty()) throw DomainError("alloc", "budget too small: non-positive capacity on edges " + bad);
}

// c_i = mu_i + k sigma_i with one k fixed by sum c_i = budget.
inline CapacityAllocation mu_k_sigma_allocation(const std::vector<GaussianParams>& params, double budget) {
  const double sum_sigma = sum_of(params, &GaussianParams::sigma);
  if (!(sum_sigma > 0.0)) throw DomainError("alloc", "mu + k sigma needs a positive total sigma");
  const double k = (budget - sum_of(params, &GaussianParams::mu)) / sum_sigma;
  CapacityAllocation a;
  a.k = k;
  a.budget = budget;
  for (const auto& g : params) a.capacities.push_back(g.mu + k * g.sigma);
  require_positive(a.capacities);
  return a;
}

// Recovers k from a mu + k sigma allocation.
inline double recover_k(const CapacityAllocation& a, const std::vector<GaussianParams>& params) {
  return (a.sum() - sum_of(params, &GaussianParams::mu)) / sum_of(params, &GaussianParams::sigma);
}

// Maximises prod_i H((C_i - mu_i) / sigma_i) subject to sum C_i = budget.
// Stationarity: h(z_i) / (sigma_i H(z_i)) = lambda for all i, z_i the
// standardised headroom. Inner bisection inverts the decreasing map for each
// edge; outer bisection on log lambda matches the budget.
inline CapacityAllocation lagrangian_allocation(const std::vector<GaussianParams>& params, double budget,
                                                double tolerance = 1e-9) {
  if (params.empty()) throw DomainError("alloc", "no edges");
  for (const auto& g : params) {
    if (!(g.sigma > 0.0)) throw DomainError("alloc", "Lagrangian allocation needs sigma > 0 on every edge");
  }
  constexpr double kZmin = -35.0, kZmax = 35.0;
  auto z_for = [&](double target) {
    // hazard_ratio(z) = target, hazard_ratio decreasing.
    double lo = kZmin, hi = kZmax;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (normal::hazard_ratio(mid) > target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  auto total_for = [&](double log_lambda, std::vector<double>* caps) {
    const double lambda = std::exp(log_lambda);
    double s = 0.0;
    if (caps) caps->clear();
    for (const auto& g : params) {
      const double c = g.mu + g.sigma * z_for(lambda * g.sigma);
      s += c;
      if (caps) caps->push_back(c);
    }
    return s;
  };
  // Total is decreasing in lambda.
  double lo = -800.0, hi = 10.0;
  std::vector<double> caps;
  double residual = 0.0;
  int it = 0;
  for (; it < 10000; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double total = total_for(mid, &caps);
    residual = total - budget;
    if (std::abs(residual) <= tolerance) break;
    if (residual > 0.0) lo = mid; else hi = mid;
    if (hi - lo < 1e-15) {
      ++it;
      break;
    }
  }
  if (std::abs(residual) > tolerance) {
    // Bisection on lambda stalled at floating-point resolution: spread the
    // remaining residual in proportion to sigma.
    const double ss = sum_of(params, &GaussianParams::sigma);
    for (std::size_t i = 0; i < caps.size(); ++i) caps[i] -= residual * params[i].sigma / ss;
    residual = std::accumulate(caps.begin(), caps.end(), 0.0) - budget;
    if (std::abs(residual) > tolerance) {
      throw DomainError("alloc", "Lagrangian allocation did not converge, residual " + std::to_string(residual));
    }
  }
  CapacityAllocation a;
  a.capacities = std::move(caps);
  a.budget = budget;
  require_positive(a.capacities);
  return a;
}

// Probability that at least one edge saturates, treating edge loads as
// independent Gaussians: 1 - prod_i H((c_i - mu_i) / sigma_i).
inline double saturation_probability(const CapacityAllocation& a, const std::vector<GaussianParams>& params) {
  if (a.capacities.size() != params.size()) throw StructuralError("alloc", "allocation and params sizes differ");
  double log_ok = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& g = params[i];
    const double c = a.capacities[i];
    if (g.sigma == 0.0) {
      if (c > g.mu) continue;
      return 1.0;
    }
    log_ok += std::log1p(-normal::sf((c - g.mu) / g.sigma));
  }
  return -std::expm1(log_ok);
}

// ---------------------------------------------------------------------------
// Envelope optimisation

// Per-edge flows (capacity independent) for a fixed set of demand matrices.
struct LoadSet {
  int edges = 0;
  std::vector<double> flows;  // matrix-major: flows[m * edges + e]

  std::size_t size() const { return edges ? flows.size() / edges : 0; }
};

inline LoadSet load_set(const Network& net, const Routing& f, const std::vector<TrafficMatrix>& matrices) {
  const LoadEvaluator eval(net, f);
  LoadSet s;
  s.edges = net.edge_count();
  s.flows.reserve(matrices.size() * s.edges);
  for (const auto& d : matrices) {
    for (int e = 0; e < s.edges; ++e) s.flows.push_back(eval.flow(e, d));
  }
  return s;
}

// Fraction of matrices with GC <= level under the given capacities.
inline double fraction_below(const LoadSet& s, const std::vector<double>& caps, double level) {
  long ok = 0;
  const std::size_t m = s.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double* row = &s.flows[k * s.edges];
    bool fits = true;
    for (int e = 0; e < s.edges && fits; ++e) fits = row[e] <= level * caps[e];
    ok += fits;
  }
  return m ? static_cast<double>(ok) / m : 0.0;
}

inline std::vector<double> gc_values(const LoadSet& s, const std::vector<double>& caps) {
  std::vector<double> out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    double gc = 0.0;
    for (int e = 0; e < s.edges; ++e) gc = std::max(gc, s.flows[k * s.edges + e] / caps[e]);
    out.push_back(gc);
  }
  return out;
}

struct HillClimbResult {
  std::vector<double> capacities;
  double fraction = 0.0;
  std::vector<double> trace;  // objective after each iteration, nondecreasing
};

inline constexpr double kCapacityFloor = 1e-6;

// Accept-if-better local search on {c > 0, sum c = budget}: Gaussian
// perturbation (SD = step_fraction * budget / |E|), re-centred onto the
// budget hyperplane, floored and rescaled.
inline HillClimbResult hill_climb(const LoadSet& s, std::vector<double> start, double budget, double level,
                                  long iterations, Rng& rng, double step_fraction = 0.02, bool keep_trace = false) {
  const int ne = s.edges;
  const double sd = step_fraction * budget / ne;
  HillClimbResult r;
  r.capacities = std::move(start);
  r.fraction = fraction_below(s, r.capacities, level);
  std::vector<double> cand(ne), delta(ne);
  for (long it = 0; it < iterations; ++it) {
    double mean = 0.0;
    for (int e = 0; e < ne; ++e) {
      delta[e] = sd * rng.normal();
      mean += delta[e];
    }
    mean /= ne;
    double sum = 0.0;
    for (int e = 0; e < ne; ++e) {
      cand[e] = std::max(kCapacityFloor, r.capacities[e] + delta[e] - mean);
      sum += cand[e];
    }
    for (double& c : cand) c *= budget / sum;
    const double frac = fraction_below(s, cand, level);
    if (frac > r.fraction) {
      r.fraction = frac;
      r.capacities = cand;
    }
    if (keep_trace) r.trace.push_back(r.fraction);
  }
  return r;
}

struct EnvelopeOptions {
  long iterations = 10000;
  std::uint64_t seed = 0;
  double step_fraction = 0.02;
  std::vector<double> levels;                    // empty: default grid
  int grid_points = 40;
  std::optional<std::vector<double>> mu_k_sigma; // optional extra start point
  // Grid indices where two independent restarts (homogeneous and
  // mu + k sigma starts) are run and reported. Empty: the middle point.
  std::vector<int> restart_checks;
};

struct EnvelopePoint {
  double level = 0.0;
  double envelope = 0.0;      // best fraction found at this level
  double homogeneous = 0.0;   // fraction under the homogeneous allocation
  double mu_k_sigma = 0.0;    // fraction under mu + k sigma (if given)
  std::vector<double> allocation;
};

struct RestartCheck {
  double level = 0.0;
  double from_homogeneous = 0.0;
  double from_mu_k_sigma = 0.0;
};

struct EnvelopeReport {
  std::vector<EnvelopePoint> points;
  std::vector<RestartCheck> restarts;
};

// Default levels: from the smallest GC any allocation could reach on the
// sample set (sum of flows / budget) to the homogeneous worst case.
inline std::vector<double> default_levels(const Network& net, const Routing& f, const LoadSet& s, double budget,
                                          int points) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.size(); ++k) {
    double tot = 0.0;
    for (int e = 0; e < s.edges; ++e) tot += s.flows[k * s.edges + e];
    lo = std::min(lo, tot / budget);
  }
  const std::vector<double> homog(net.edge_count(), budget / net.edge_count());
  double hi = 0.0;
  if (net.homogeneous()) {
    const Network scaled = net.with_capacities(homog);
    for (int e = 0; e < net.edge_count(); ++e) hi = std::max(hi, worst_case_edge_congestion(scaled, f, e));
  } else {
    for (double v : gc_values(s, homog)) hi = std::max(hi, v);
  }
  std::vector<double> levels;
  for (int i = 0; i < points; ++i) levels.push_back(points == 1 ? hi : lo + (hi - lo) * i / (points - 1));
  return levels;
}

// For each level L, hill-climbs the fraction of sample matrices with
// GC <= L. Each climb starts from the best of: homogeneous allocation,
// mu + k sigma (if supplied) and the previous level's optimum, so the
// envelope dominates both fixed schemes and is nondecreasing in L. A final
// pass scores every climbed allocation at every level and keeps the best.
inline EnvelopeReport optimize_envelope(const Network& net, const Routing& f, const std::vector<TrafficMatrix>& sample,
                                        double budget, EnvelopeOptions opt = {}) {
  const int ne = net.edge_count();
  if (!(budget > kCapacityFloor * ne)) throw DomainError("alloc", "budget too small for the capacity floor");
  if (sample.empty()) throw DomainError("alloc", "empty matrix sample");
  const LoadSet s = load_set(net, f, sample);
  if (opt.levels.empty()) opt.levels = default_levels(net, f, s, budget, opt.grid_points);
  std::sort(opt.levels.begin(), opt.levels.end());
  const std::vector<double> homog(ne, budget / ne);
  if (opt.mu_k_sigma && opt.mu_k_sigma->size() != static_cast<std::size_t>(ne)) {
    throw StructuralError("alloc", "mu + k sigma allocation size mismatch");
  }
  if (opt.restart_checks.empty()) opt.restart_checks.push_back(static_cast<int>(opt.levels.size() / 2));

  EnvelopeReport rep;
  std::vector<double> prev;
  for (std::size_t li = 0; li < opt.levels.size(); ++li) {
    const double level = opt.levels[li];
    EnvelopePoint pt;
    pt.level = level;
    pt.homogeneous = fraction_below(s, homog, level);
    pt.mu_k_sigma = opt.mu_k_sigma ? fraction_below(s, *opt.mu_k_sigma, level) : 0.0;
    std::vector<double> start = homog;
    double best = pt.homogeneous;
    if (opt.mu_k_sigma && pt.mu_k_sigma > best) {
      start = *opt.mu_k_sigma;
      best = pt.mu_k_sigma;
    }
    if (!prev.empty()) {
      const double carried = fraction_below(s, prev, level);
      if (carried > best) start = prev;
    }
    Rng rng(chain_seed(opt.seed, li));
    HillClimbResult r = hill_climb(s, start, budget, level, opt.iterations, rng, opt.step_fraction);
    pt.envelope = r.fraction;
    pt.allocation = r.capacities;
    prev = r.capacities;
    rep.points.push_back(std::move(pt));
  }
  // Every climbed allocation is a feasible point at every level.
  for (EnvelopePoint& pt : rep.points) {
    for (const EnvelopePoint& other : rep.points) {
      const double frac = fraction_below(s, other.allocation, pt.level);
      if (frac > pt.envelope) {
        pt.envelope = frac;
        pt.allocation = other.allocation;
      }
    }
  }
  for (int idx : opt.restart_checks) {
    if (idx < 0 || idx >= static_cast<int>(opt.levels.size())) continue;
    RestartCheck rc;
    rc.level = opt.levels[idx];
    Rng r1(chain_seed(opt.seed ^ 0xA11CE, idx)), r2(chain_seed(opt.seed ^ 0xB0B, idx));
    rc.from_homogeneous = hill_climb(s, homog, budget, rc.level, opt.iterations, r1, opt.step_fraction).fraction;
    rc.from_mu_k_sigma =
        hill_climb(s, opt.mu_k_sigma ? *opt.mu_k_sigma : homog, budget, rc.level, opt.iterations, r2, opt.step_fraction)
            .fraction;
    rep.restarts.push_back(rc);
  }
  return rep;
}

}  // namespace tplot
