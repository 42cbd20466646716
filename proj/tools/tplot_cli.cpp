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

// tplot command-line tool: T-Plots, Gaussian fits, bounds and capacity
// allocation for a network under oblivious routing.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "tplot/tplot.hpp"

namespace {

using nlohmann::json;
using namespace tplot;

struct RunConfig {
  std::string network = "abilene-homogeneous";
  std::string routing;  // empty: shortest-path
  std::string tset = "A";
  std::string edge;
  bool global = false;
  bool throughput = false;
  long samples = 100000;
  std::uint64_t seed = 0;
  int bins = kDefaultBins;
  int chains = 1;
  std::string format = "csv";
  std::string out;
  double tol = kConservationTolerance;
  bool long_run = false;

  // subcommand specific
  long moment_samples = 100000;
  double alpha = 0.05;
  std::string npp_out;
  int points = 50;
  double budget = 0.0;
  std::string method = "mu-k-sigma";
  long iterations = 10000;
  int grid_points = 8;
  std::string matrix;
  int repetitions = 50;
  double level = -1.0;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string canonical(const std::string& cmd, const RunConfig& c) {
  std::ostringstream s;
  s.precision(17);
  s << "cmd=" << cmd << ";network=" << c.network << ";routing=" << c.routing << ";tset=" << c.tset
    << ";edge=" << c.edge << ";global=" << c.global << ";throughput=" << c.throughput << ";samples=" << c.samples
    << ";seed=" << c.seed << ";bins=" << c.bins << ";chains=" << c.chains << ";format=" << c.format
    << ";tol=" << c.tol << ";long_run=" << c.long_run << ";moment_samples=" << c.moment_samples
    << ";alpha=" << c.alpha << ";points=" << c.points << ";budget=" << c.budget << ";method=" << c.method
    << ";iterations=" << c.iterations << ";grid_points=" << c.grid_points << ";matrix=" << c.matrix
    << ";repetitions=" << c.repetitions << ";level=" << c.level;
  return s.str();
}

struct Provenance {
  std::string command;
  std::uint64_t seed = 0;
  std::string digest;

  std::string csv_header() const {
    return "# tplot " + std::string(kVersion) + "\n# command: " + command + "\n# seed: " + std::to_string(seed) +
           "\n# config-digest: " + digest + "\n";
  }
  json as_json() const {
    return {{"tool", "tplot"}, {"version", kVersion}, {"command", command}, {"seed", seed}, {"config_digest", digest}};
  }
};

Provenance provenance(const std::string& cmd, const RunConfig& c) {
  std::ostringstream d;
  d << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canonical(cmd, c));
  return {cmd, c.seed, d.str()};
}

// Output sink: --out file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw StructuralError("cli", "cannot write " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_csv_doc(const RunConfig& c, const Provenance& p, const std::string& body) {
  Sink sink(c.out);
  sink.os() << p.csv_header() << body;
}

void write_json_doc(const RunConfig& c, const Provenance& p, json doc) {
  doc["provenance"] = p.as_json();
  Sink sink(c.out);
  sink.os() << doc.dump(2) << '\n';
}

Network load_network(const std::string& arg) {
  for (const auto& name : fixtures::fixture_names()) {
    if (arg == name) return fixtures::load_fixture(name);
  }
  if (!std::filesystem::exists(arg)) {
    throw DomainError("cli", "'" + arg + "' is neither a fixture name nor an existing file");
  }
  return io::load_network(arg);
}

struct Problem {
  Network net;
  Routing routing;
  TSetSpec tset;
};

Problem load_problem(const RunConfig& c) {
  Network net = load_network(c.network);
  Routing f = c.routing.empty() ? shortest_path_routing(net) : io::routing_from_json(net, io::read_json_file(c.routing));
  const ValidationReport rep = validate_routing(net, f, c.tol);
  if (!rep.ok()) {
    const auto& v = rep.violations.front();
    throw StructuralError("net", "routing fails flow conservation for " + detail::pair_name(net, v.src, v.dst) +
                                     " (" + std::to_string(rep.violations.size()) + " violations)");
  }
  TSetSpec t = tset_for_network(parse_tset_kind(c.tset), net);
  return {std::move(net), std::move(f), std::move(t)};
}

SamplerConfig sampler_config(const RunConfig& c) {
  SamplerConfig s;
  s.seed = c.seed;
  return s;
}

int edge_arg(const Network& net, const RunConfig& c) {
  if (c.edge.empty()) throw DomainError("cli", "--edge is required");
  return net.edge_index(c.edge);
}

Target target_arg(const Network& net, const RunConfig& c) {
  if (c.throughput) return Target::throughput();
  if (c.global || c.edge.empty()) return Target::global();
  return Target::edge_load(edge_arg(net, c));
}

void emit_tplot(const RunConfig& c, const Provenance& p, const TPlot& tp, const Network& net) {
  if (c.format == "json") {
    write_json_doc(c, p, to_json(tp, &net));
    return;
  }
  std::ostringstream body;
  write_csv(body, tp);
  write_csv_doc(c, p, body.str());
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

MomentTable moment_table_for(const TSetSpec& t, const RunConfig& c) {
  return MomentCache().get_or_compute(t, sampler_config(c), c.moment_samples);
}

// ---------------------------------------------------------------------------

void cmd_tplot(const RunConfig& c, const Provenance& p, bool global) {
  const Problem pr = load_problem(c);
  const Target target = global ? (c.throughput ? Target::throughput() : Target::global())
                               : Target::edge_load(edge_arg(pr.net, c));
  BuildOptions opt;
  opt.bins = c.bins;
  opt.chains = c.chains;
  const TPlot tp = build_tplot(pr.net, pr.routing, pr.tset, target, c.samples, sampler_config(c), opt);
  emit_tplot(c, p, tp, pr.net);
}

void cmd_exact(const RunConfig& c, const Provenance& p) {
  const Problem pr = load_problem(c);
  if (!pr.tset.discrete()) throw DomainError("cli", "exact-tplot needs --tset P or Pd");
  const Target target = target_arg(pr.net, c);
  const int limit = c.long_run ? kLongRunEnumerationLimit : kDefaultEnumerationLimit;
  if (target.kind == TargetKind::kThroughput) {
    TPlot gc = exact_tplot_permutations(pr.net, pr.routing, Target::global(), pr.tset.zero_diagonal(), limit);
    gc.tset = pr.tset;
    emit_tplot(c, p, throughput_ccdf(gc), pr.net);
    return;
  }
  TPlot tp = exact_tplot_permutations(pr.net, pr.routing, target, pr.tset.zero_diagonal(), limit);
  tp.tset = pr.tset;
  emit_tplot(c, p, tp, pr.net);
}

void cmd_gaussian(const RunConfig& c, const Provenance& p) {
  const Problem pr = load_problem(c);
  std::vector<int> edges;
  if (c.edge.empty()) {
    for (int e = 0; e < pr.net.edge_count(); ++e) edges.push_back(e);
  } else {
    edges.push_back(edge_arg(pr.net, c));
  }
  std::optional<MomentTable> table;
  if (!pr.tset.discrete()) table = moment_table_for(pr.tset, c);
  json rows = json::array();
  std::ostringstream body;
  body << "edge,mu,sigma,method\n";
  for (int e : edges) {
    const GaussianParams g = gaussian_params(pr.net, pr.routing, e, pr.tset, table ? &*table : nullptr);
    body << pr.net.edge(e).id << ',' << fmt(g.mu) << ',' << fmt(g.sigma) << ',' << to_string(g.method) << '\n';
    rows.push_back({{"edge", pr.net.edge(e).id}, {"mu", g.mu}, {"sigma", g.sigma}, {"method", to_string(g.method)}});
  }
  if (c.format == "json") {
    write_json_doc(c, p, {{"tset", pr.tset.name()}, {"params", rows}});
  } else {
    write_csv_doc(c, p, body.str());
  }
}

void cmd_normality(const RunConfig& c, const Provenance& p) {
  const Problem pr = load_problem(c);
  const Target target = target_arg(pr.net, c);
  const auto values = sample_values_chains(pr.net, pr.routing, pr.tset, target, c.samples, sampler_config(c), c.chains);
  const LillieforsResult lr = lilliefors_test(values, c.alpha);
  const auto npp = npp_data(values);
  const double r = npp_correlation(npp);
  if (!c.npp_out.empty()) {
    std::ofstream out(c.npp_out);
    if (!out) throw StructuralError("cli", "cannot write " + c.npp_out);
    out << p.csv_header();
    write_npp_csv(out, npp);
  }
  if (c.format == "json") {
    write_json_doc(c, p,
                   {{"target", target.label(&pr.net)},
                    {"samples", values.size()},
                    {"alpha", c.alpha},
                    {"statistic", lr.statistic},
                    {"critical", lr.critical},
                    {"reject", lr.reject},
                    {"note", lr.note},
                    {"npp_correlation", r}});
    return;
  }
  std::ostringstream body;
  body << "target,samples,alpha,statistic,critical,reject,npp_correlation\n"
       << target.label(&pr.net) << ',' << values.size() << ',' << fmt(c.alpha) << ',' << fmt(lr.statistic) << ','
       << fmt(lr.critical) << ',' << (lr.reject ? "true" : "false") << ',' << fmt(r) << '\n';
  write_csv_doc(c, p, body.str());
}

// Samples once and derives every edge plot, the dummy-edge plot for the two
// most loaded edges and the empirical global plot from the same matrices.
void cmd_bounds(const RunConfig& c, const Provenance& p) {
  const Problem pr = load_problem(c);
  const int ne = pr.net.edge_count();
  const LoadEvaluator eval(pr.net, pr.routing);
  std::vector<std::vector<double>> ec(ne);
  std::vector<double> gc;
  for_each_sample(pr.tset, sampler_config(c), c.samples, [&](const TrafficMatrix& d) {
    double g = 0.0;
    for (int e = 0; e < ne; ++e) {
      const double v = eval.congestion(e, d);
      ec[e].push_back(v);
      g = std::max(g, v);
    }
    gc.push_back(g);
  });
  std::vector<double> means(ne);
  for (int e = 0; e < ne; ++e) means[e] = empirical_params(ec[e]).mu;
  const auto [e1, e2] = two_most_loaded(means);
  std::vector<double> dummy(gc.size());
  for (std::size_t k = 0; k < gc.size(); ++k) dummy[k] = ec[e1][k] + ec[e2][k];

  auto plot = [&](const std::vector<double>& v) {
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return histogram(v, *mn, *mx > *mn ? *mx : *mn + 1.0, c.bins);
  };
  std::vector<TPlot> edge_plots;
  for (int e = 0; e < ne; ++e) edge_plots.push_back(plot(ec[e]));
  const TPlot dummy_plot = plot(dummy);
  const TPlot gc_plot = plot(gc);

  const double hi = *std::max_element(gc.begin(), gc.end());
  std::ostringstream body;
  json rows = json::array();
  body << "L,approx,upper,lower,empirical\n";
  for (int i = 0; i < c.points; ++i) {
    const double level = c.points == 1 ? hi : hi * i / (c.points - 1);
    const GlobalCdfBounds b = global_cdf_bounds(edge_plots, dummy_plot, e1, e2, level);
    const double emp = gc_plot.cdf(level);
    body << fmt(level) << ',' << fmt(b.independence_approx) << ',' << fmt(b.upper_bound) << ',' << fmt(b.lower_bound)
         << ',' << fmt(emp) << '\n';
    rows.push_back({{"L", level},
                    {"approx", b.independence_approx},
                    {"upper", b.upper_bound},
                    {"lower", b.lower_bound},
                    {"empirical", emp}});
  }
  if (c.format == "json") {
    write_json_doc(c, p,
                   {{"dummy_edges", {pr.net.edge(e1).id, pr.net.edge(e2).id}}, {"samples", gc.size()}, {"rows", rows}});
  } else {
    write_csv_doc(c, p, "# dummy edges: " + pr.net.edge(e1).id + "," + pr.net.edge(e2).id + "\n" + body.str());
  }
}

std::vector<GaussianParams> all_edge_params(const Problem& pr, const RunConfig& c) {
  std::optional<MomentTable> table;
  if (!pr.tset.discrete()) table = moment_table_for(pr.tset, c);
  std::vector<GaussianParams> params;
  for (int e = 0; e < pr.net.edge_count(); ++e) {
    params.push_back(gaussian_params(pr.net, pr.routing, e, pr.tset, table ? &*table : nullptr));
  }
  return params;
}

double budget_arg(const Problem& pr, const RunConfig& c) {
  if (c.budget > 0.0) return c.budget;
  double total = 0.0;
  for (const Edge& e : pr.net.edges()) total += e.capacity;
  return total;
}

void cmd_capalloc(const RunConfig& c, const Provenance& p) {
  const Problem pr = load_problem(c);
  const double budget = budget_arg(pr, c);
  const auto params = all_edge_params(pr, c);
  CapacityAllocation a;
  if (c.method == "mu-k-sigma") {
    a = mu_k_sigma_allocation(params, budget);
  } else if (c.method == "lagrangian") {
    a = lagrangian_allocation(params, budget);
  } else {
    throw DomainError("cli", "unknown allocation method '" + c.method + "'");
  }
  const double sat = saturation_probability(a, params);
  json rows = json::array();
  std::ostringstream body;
  body << "# budget: " << fmt(budget) << "\n# k: " << (a.k ? fmt(*a.k) : "") << "\n# saturation_probability: "
       << fmt(sat) << "\nedge,mu,sigma,capacity\n";
  for (int e = 0; e < pr.net.edge_count(); ++e) {
    body << pr.net.edge(e).id << ',' << fmt(params[e].mu) << ',' << fmt(params[e].sigma) << ','
         << fmt(a.capacities[e]) << '\n';
    rows.push_back({{"edge", pr.net.edge(e).id},
                    {"mu", params[e].mu},
                    {"sigma", params[e].sigma},
                    {"capacity", a.capacities[e]}});
  }
  if (c.format == "json") {
    json doc = {{"method", c.method}, {"budget", budget}, {"saturation_probability", sat}, {"edges", rows}};
    if (a.k) doc["k"] = *a.k;
    write_json_doc(c, p, doc);
  } else {
    write_csv_doc(c, p, body.str());
  }
}

void cmd_envelope(const RunConfig& c, const Provenance& p) {
  const Problem pr = load_problem(c);
  const double budget = budget_arg(pr, c);
  const auto matrices = sample_stream(pr.tset, sampler_config(c), c.samples);
  EnvelopeOptions opt;
  opt.iterations = c.iterations;
  opt.seed = c.seed;
  opt.grid_points = c.long_run ? 40 : c.grid_points;
  // The mu + k sigma start needs second moments; the sample itself supplies them.
  const LoadSet s = load_set(pr.net, pr.routing, matrices);
  std::vector<GaussianParams> params(pr.net.edge_count());
  for (int e = 0; e < s.edges; ++e) {
    std::vector<double> v(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) v[k] = s.flows[k * s.edges + e];
    params[e] = empirical_params(v);
  }
  try {
    opt.mu_k_sigma = mu_k_sigma_allocation(params, budget).capacities;
  } catch (const DomainError& ex) {
    std::cerr << "tplot: mu + k sigma start skipped: " << ex.what() << '\n';
  }
  const EnvelopeReport rep = optimize_envelope(pr.net, pr.routing, matrices, budget, opt);
  json rows = json::array();
  std::ostringstream body;
  body << "L,envelope_fraction,homogeneous_fraction,mu_k_sigma_fraction\n";
  for (const EnvelopePoint& pt : rep.points) {
    body << fmt(pt.level) << ',' << fmt(pt.envelope) << ',' << fmt(pt.homogeneous) << ',' << fmt(pt.mu_k_sigma)
         << '\n';
    rows.push_back({{"L", pt.level},
                    {"envelope_fraction", pt.envelope},
                    {"homogeneous_fraction", pt.homogeneous},
                    {"mu_k_sigma_fraction", pt.mu_k_sigma},
                    {"allocation", pt.allocation}});
  }
  std::ostringstream restarts;
  json jr = json::array();
  for (const RestartCheck& r : rep.restarts) {
    restarts << "# restart L=" << fmt(r.level) << " from_homogeneous=" << fmt(r.from_homogeneous)
             << " from_mu_k_sigma=" << fmt(r.from_mu_k_sigma) << '\n';
    jr.push_back({{"L", r.level}, {"from_homogeneous", r.from_homogeneous}, {"from_mu_k_sigma", r.from_mu_k_sigma}});
  }
  if (c.format == "json") {
    write_json_doc(c, p, {{"budget", budget}, {"points", rows}, {"restarts", jr}});
  } else {
    write_csv_doc(c, p, restarts.str() + body.str());
  }
}

void cmd_sample(const RunConfig& c, const Provenance& p) {
  const Network net = load_network(c.network);
  const TSetSpec t = tset_for_network(parse_tset_kind(c.tset), net);
  Sink sink(c.out);
  if (c.format == "json") {
    json rows = json::array();
    for_each_sample(t, sampler_config(c), c.samples, [&](const TrafficMatrix& d) { rows.push_back(d.data()); });
    json doc = {{"tset", t.name()}, {"matrices", rows}, {"provenance", p.as_json()}};
    sink.os() << doc.dump() << '\n';
    return;
  }
  sink.os() << p.csv_header();
  for_each_sample(t, sampler_config(c), c.samples, [&](const TrafficMatrix& d) { io::write_matrix_row(sink.os(), d); });
}

void cmd_reduce(const RunConfig& c, const Provenance& p) {
  const Network net = load_network(c.network);
  if (c.matrix.empty()) throw DomainError("cli", "--matrix is required");
  const ZeroOneMatrix a = ZeroOneMatrix::from(io::load_matrix_csv(c.matrix));
  const ReductionCheck r = verify_reduction(net, edge_arg(net, c), a);
  if (c.format == "json") {
    write_json_doc(c, p,
                   {{"permanent", r.permanent}, {"scaled_mass", r.scaled_mass}, {"level", r.level}, {"equal", r.equal}});
  } else {
    std::ostringstream body;
    body << "permanent,n_factorial_pdf,level,equal\n"
         << r.permanent << ',' << r.scaled_mass << ',' << fmt(r.level) << ',' << (r.equal ? "true" : "false") << '\n';
    write_csv_doc(c, p, body.str());
  }
}

void cmd_diagnostics(const RunConfig& c, const Provenance& p) {
  const Problem pr = load_problem(c);
  const LoadEvaluator eval(pr.net, pr.routing);
  const Target target = target_arg(pr.net, c);
  auto stat = [&](const TrafficMatrix& d) {
    switch (target.kind) {
      case TargetKind::kEdge: return eval.congestion(target.edge, d);
      case TargetKind::kGlobal: return eval.global(d);
      case TargetKind::kThroughput: return throughput_from_congestion(eval.global(d));
    }
    return 0.0;
  };
  double level = c.level;
  if (level < 0.0) {
    // Median of a pilot run keeps the indicator away from p = 0 or 1.
    auto pilot = sample_values(pr.net, pr.routing, pr.tset, target, 2000, sampler_config(c));
    std::nth_element(pilot.begin(), pilot.begin() + pilot.size() / 2, pilot.end());
    level = pilot[pilot.size() / 2];
  }
  ConvergenceOptions opt;
  opt.repetitions = c.repetitions;
  opt.two_start_samples = c.samples;
  opt.sample_counts.clear();
  for (long m = 100; m <= c.samples; m *= 10) opt.sample_counts.push_back(m);
  if (opt.sample_counts.empty()) throw DomainError("cli", "diagnostics need --samples >= 100");
  const ConvergenceReport rep = convergence_diagnostics(
      pr.tset, sampler_config(c), [&](const TrafficMatrix& d) { return stat(d) <= level; }, stat, opt);
  json rows = json::array();
  std::ostringstream body;
  body << "# indicator: " << target.label(&pr.net) << " <= " << fmt(level) << "\n# p: " << fmt(rep.p)
       << "\n# sup_distance: " << fmt(rep.sup_distance) << "\nm,variance,predicted,ratio\n";
  for (std::size_t i = 0; i < rep.sample_counts.size(); ++i) {
    const double ratio = rep.predicted[i] > 0.0 ? rep.variance[i] / rep.predicted[i] : 0.0;
    body << rep.sample_counts[i] << ',' << fmt(rep.variance[i]) << ',' << fmt(rep.predicted[i]) << ',' << fmt(ratio)
         << '\n';
    rows.push_back({{"m", rep.sample_counts[i]},
                    {"variance", rep.variance[i]},
                    {"predicted", rep.predicted[i]},
                    {"ratio", ratio}});
  }
  if (c.format == "json") {
    write_json_doc(c, p, {{"level", level}, {"p", rep.p}, {"sup_distance", rep.sup_distance}, {"rows", rows}});
  } else {
    write_csv_doc(c, p, body.str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tplot: traffic load distribution plots for oblivious routing"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--network", cfg.network, "Network JSON file or fixture name")->capture_default_str();
    sub->add_option("--routing", cfg.routing, "Routing JSON file (default: shortest-path)");
    sub->add_option("--tset", cfg.tset, "T-Set: P, Pd, S, Sd, A, Ad, H, H_surface")->capture_default_str();
    sub->add_option("--edge", cfg.edge, "Edge id or TAIL-HEAD name");
    sub->add_option("--samples", cfg.samples, "Sample count m")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--bins", cfg.bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--chains", cfg.chains, "Independent sampling chains")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "Output path (default: stdout)");
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--tol", cfg.tol, "Flow-conservation tolerance")->capture_default_str();
    sub->add_flag("--long-run", cfg.long_run, "Lift size limits for long exhaustive runs");
  };
  auto moments = [&](CLI::App* sub) {
    sub->add_option("--moment-samples", cfg.moment_samples, "Walk samples for continuous moment tables")
        ->capture_default_str();
  };

  std::map<CLI::App*, std::function<void(const RunConfig&, const Provenance&)>> handlers;
  auto add = [&](const std::string& name, const std::string& help, auto fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    handlers[sub] = fn;
    return sub;
  };

  auto* edge = add("tplot-edge", "Sampled T-Plot of one edge's congestion",
                   [](const RunConfig& c, const Provenance& p) { cmd_tplot(c, p, false); });
  (void)edge;
  auto* global = add("tplot-global", "Sampled T-Plot of global congestion (or throughput)",
                     [](const RunConfig& c, const Provenance& p) { cmd_tplot(c, p, true); });
  global->add_flag("--throughput", cfg.throughput, "Plot throughput min(1/GC, 1) instead");
  auto* exact = add("exact-tplot", "Exact T-Plot by enumerating every permutation", cmd_exact);
  exact->add_flag("--global", cfg.global, "Global congestion instead of an edge");
  exact->add_flag("--throughput", cfg.throughput, "Throughput instead of congestion");
  moments(add("gaussian-params", "Gaussian (mu, sigma) of edge loads", cmd_gaussian));
  auto* norm = add("normality", "Lilliefors test and normal probability plot", cmd_normality);
  norm->add_option("--alpha", cfg.alpha, "Significance level")->capture_default_str();
  norm->add_option("--npp-out", cfg.npp_out, "Write probability-plot CSV here");
  norm->add_flag("--global", cfg.global, "Global congestion instead of an edge");
  auto* bounds = add("bounds", "Global-CDF approximation and bounds against the empirical CDF", cmd_bounds);
  bounds->add_option("--points", cfg.points, "Grid points")->check(CLI::PositiveNumber)->capture_default_str();
  auto* cap = add("capalloc", "Capacity allocation from Gaussian edge parameters", cmd_capalloc);
  cap->add_option("--budget", cfg.budget, "Total capacity (default: current total)");
  cap->add_option("--method", cfg.method, "Allocation rule")
      ->check(CLI::IsMember({"mu-k-sigma", "lagrangian"}))
      ->capture_default_str();
  moments(cap);
  auto* env = add("optimize-envelope", "Hill-climbed optimal-allocation envelope", cmd_envelope);
  env->add_option("--budget", cfg.budget, "Total capacity (default: current total)");
  env->add_option("--iterations", cfg.iterations, "Hill-climb iterations per level")->capture_default_str();
  env->add_option("--grid-points", cfg.grid_points, "Congestion levels (40 with --long-run)")->capture_default_str();
  add("sample", "Emit sampled traffic matrices, one row-major line each", cmd_sample);
  auto* red = add("reduce-permanent", "Check Perm(A) against the reduction's T-Plot atom", cmd_reduce);
  red->add_option("--matrix", cfg.matrix, "0-1 matrix CSV");
  auto* diag = add("diagnostics", "Sampler convergence diagnostics", cmd_diagnostics);
  diag->add_option("--repetitions", cfg.repetitions, "Independent repeated runs")->capture_default_str();
  diag->add_option("--level", cfg.level, "Indicator threshold (default: pilot median)");
  diag->add_flag("--global", cfg.global, "Global congestion instead of an edge");

  CLI11_PARSE(app, argc, argv);
  for (auto& [sub, fn] : handlers) {
    if (!sub->parsed()) continue;
    try {
      fn(cfg, provenance(sub->get_name(), cfg));
    } catch (const Error& ex) {
      std::cerr << "tplot " << sub->get_name() << ": " << ex.what() << '\n';
      return 2;
    } catch (const std::exception& ex) {
      std::cerr << "tplot " << sub->get_name() << ": " << ex.what() << '\n';
      return 1;
    }
  }
  return 0;
}
