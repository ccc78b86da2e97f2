// builder.hpp — grammar-driven construction of principal graphs.
//
// The loop: initialize a 2-node segment on the first principal line, then
// cycle the grammar sequence; each application enumerates every candidate
// transformation, scores the permissible ones with a capped EM fit, takes
// the energy argmin, re-fits it fully, and appends a complexity record.
#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "epg/energy.hpp"
#include "epg/generators.hpp"
#include "epg/grammar.hpp"
#include "epg/optimizer.hpp"

namespace epg {

struct BuilderConfig {
  std::vector<std::string> grammar_sequence = {"tree", "tree", "shrink"};
  StructuralPolicy policy;
  int cc_max = 50;  // maximum number of grammar applications
  FitConfig fit;
  int candidate_fit_iterations = 10;  // EM cap while scoring candidates
  // A shrink argmin is taken even when it raises the energy (trimming can
  // pay off later); set false to skip those applications instead.
  bool allow_energy_increase_on_shrink = true;
  double fve_stop = 0.999;  // stop once polyline FVE reaches this; > 1 disables
  bool keep_graphs = true;  // store the per-step graphs in the trace
};

// One growth step: the operation applied and every plotted quantity,
// measured after the full re-fit of the selected candidate.
struct ComplexityRecord {
  int step = 0;  // 0 = initial segment, then grammar-application index
  std::string op_kind = "init";
  GrammarOperation operation;
  int node_count = 0;
  double fve_node = 0.0;
  double fve_polyline = 0.0;
  double stretching = 0.0;  // U_E at the fitted moduli
  double bending = 0.0;     // U_R at the fitted moduli
  double gc = 0.0;          // node_count^2 * U_R at unit moduli
  Barcode bar;
  double total_energy = 0.0;
  int historical_cc = 0;
};

struct Trace {
  std::vector<ComplexityRecord> records;
  std::vector<ElasticGraph> graphs;  // parallel to records when kept
  int historical_cc = 0;             // every grammar application, trims included
  int denovo_cc = 0;                 // node_count - 1 of the final graph
};

// Flat row for CSV/JSON emission; column order is the trace-CSV contract.
struct TraceRow {
  long step = 0;
  std::string op_kind;
  long n_nodes = 0;
  std::string barcode;
  double fve_node = 0.0;
  double fve_polyline = 0.0;
  double u_e = 0.0;
  double u_r = 0.0;
  double gc = 0.0;
  double total_energy = 0.0;
  long historical_cc = 0;
};

inline std::vector<TraceRow> trace_to_records(const Trace& trace) {
  if (trace.records.empty()) throw data_error("empty trace");
  std::vector<TraceRow> rows;
  rows.reserve(trace.records.size());
  for (const auto& r : trace.records) {
    rows.push_back({r.step, r.op_kind, r.node_count, r.bar.str(), r.fve_node, r.fve_polyline,
                    r.stretching, r.bending, r.gc, r.total_energy, r.historical_cc});
  }
  return rows;
}

// 2-node, 1-edge graph along the first principal component, spanning the
// extreme data projections so every point projects inside the segment.
inline ElasticGraph initialize(const DataSet& data, double lambda = 0.01) {
  if (data.size() < 2) throw data_error("initialization needs at least 2 points");
  auto mean = data_mean(data);
  if (total_variance(data) <= 0.0) throw data_error("initialization needs nonzero variance");
  auto dir = principal_direction(data.points, std::size_t(data.size()), std::size_t(data.dim), mean);
  double tmin = std::numeric_limits<double>::infinity();
  double tmax = -std::numeric_limits<double>::infinity();
  for (long i = 0; i < data.size(); ++i) {
    auto x = data.point(i);
    double t = 0.0;
    for (int j = 0; j < data.dim; ++j) t += (x[std::size_t(j)] - mean[std::size_t(j)]) * dir[std::size_t(j)];
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  ElasticGraph g;
  g.dim = data.dim;
  g.primitive = true;
  std::vector<double> p(std::size_t(data.dim));
  for (int j = 0; j < data.dim; ++j) p[std::size_t(j)] = mean[std::size_t(j)] + tmin * dir[std::size_t(j)];
  g.add_node(p);
  for (int j = 0; j < data.dim; ++j) p[std::size_t(j)] = mean[std::size_t(j)] + tmax * dir[std::size_t(j)];
  g.add_node(p);
  g.edges.push_back({0, 1, lambda});
  return g;
}

namespace detail {
inline ComplexityRecord make_record(int step, const std::string& op_kind,
                                    const GrammarOperation& op, const DataSet& data,
                                    const ElasticGraph& g, int historical_cc) {
  ComplexityRecord r;
  r.step = step;
  r.op_kind = op_kind;
  r.operation = op;
  r.node_count = g.node_count();
  auto acc = fve(data, g);
  r.fve_node = acc.fve_node;
  r.fve_polyline = acc.fve_polyline;
  auto energy = total_energy(data, g);
  r.stretching = energy.stretching;
  r.bending = energy.bending;
  r.total_energy = energy.total;
  r.gc = geometrical_complexity(g);
  r.bar = barcode(g);
  r.historical_cc = historical_cc;
  return r;
}

// Data point farthest from every current node (ties to the lowest point
// index); where the "points" grammar seats its new centroid.
inline long farthest_point(const DataSet& data, const ElasticGraph& g) {
  long best = 0;
  double best_d = -1.0;
  for (long i = 0; i < data.size(); ++i) {
    auto x = data.point(i);
    double nearest = std::numeric_limits<double>::infinity();
    for (int v = 0; v < g.node_count(); ++v) nearest = std::min(nearest, sq_dist(x, g.node(v)));
    if (nearest > best_d) {
      best_d = nearest;
      best = i;
    }
  }
  return best;
}
}  // namespace detail

// Growth from an explicit starting structure (already embedded); the
// starting graph is fully fitted and recorded as step 0.
inline Trace grow_from(const DataSet& data, const BuilderConfig& config, ElasticGraph g) {
  if (config.cc_max < 1) throw data_error("cc_max must be >= 1");
  if (config.candidate_fit_iterations < 1) throw data_error("candidate_fit_iterations must be >= 1");
  if (config.grammar_sequence.empty()) throw data_error("empty grammar sequence");

  FitConfig capped = config.fit;
  capped.softening = {{1.0, 1.0}};
  capped.max_iterations = config.candidate_fit_iterations;

  g = fit(data, g, config.fit);

  Trace trace;
  auto append = [&](int step, const std::string& kind, const GrammarOperation& op) {
    trace.records.push_back(detail::make_record(step, kind, op, data, g, trace.historical_cc));
    if (config.keep_graphs) trace.graphs.push_back(g);
  };
  append(0, "init", {});

  std::size_t seq_pos = 0;
  std::size_t last_applied_pos = 0;
  while (trace.historical_cc < config.cc_max) {
    if (trace.records.back().fve_polyline >= config.fve_stop) break;
    // a full cycle of skipped shrink steps means nothing left to do
    if (seq_pos - last_applied_pos > config.grammar_sequence.size()) break;
    const std::string preset = config.grammar_sequence[seq_pos % config.grammar_sequence.size()];
    ++seq_pos;
    auto kinds = grammar_preset(preset);
    auto candidates = enumerate_candidates(g, kinds, config.policy, config.fit.lambda_default,
                                           config.fit.mu_default);
    for (auto& cand : candidates) {
      if (cand.operation.kind != RuleKind::add_disconnected_node) continue;
      auto x = data.point(detail::farthest_point(data, g));
      auto dst = cand.result.node(cand.result.node_count() - 1);
      for (int j = 0; j < data.dim; ++j) dst[std::size_t(j)] = x[std::size_t(j)];
    }

    // Score every permissible candidate with the capped fit; argmin wins,
    // ties broken by enumeration order.
    int best = -1;
    double best_energy = std::numeric_limits<double>::infinity();
    ElasticGraph best_graph;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!candidates[c].permissible) continue;
      ElasticGraph scored = fit(data, candidates[c].result, capped);
      const double energy = total_energy(data, scored).total;
      if (energy < best_energy) {
        best_energy = energy;
        best = int(c);
        best_graph = std::move(scored);
      }
    }
    if (best < 0) break;  // permissible set empty

    const bool shrinking = candidates[std::size_t(best)].operation.kind == RuleKind::remove_leaf ||
                           candidates[std::size_t(best)].operation.kind == RuleKind::remove_edge;
    if (shrinking && !config.allow_energy_increase_on_shrink &&
        best_energy > trace.records.back().total_energy)
      continue;  // skip this application, move on in the sequence

    g = fit(data, best_graph, config.fit);
    ++trace.historical_cc;
    last_applied_pos = seq_pos;
    append(trace.historical_cc, kind_name(candidates[std::size_t(best)].operation.kind),
           candidates[std::size_t(best)].operation);
  }
  trace.denovo_cc = g.node_count() - 1;
  return trace;
}

// Standard entry point: a 2-node segment on the first principal line. A
// pure "points" sequence instead starts from a single node at the data
// mean, so after k applications there are k+1 disconnected centroids.
inline Trace grow(const DataSet& data, const BuilderConfig& config) {
  const bool points_only =
      !config.grammar_sequence.empty() &&
      std::all_of(config.grammar_sequence.begin(), config.grammar_sequence.end(),
                  [](const std::string& s) { return s == "points"; });
  ElasticGraph g;
  if (points_only) {
    g.dim = data.dim;
    g.primitive = true;
    g.add_node(data_mean(data));
    if (total_variance(data) <= 0.0) throw data_error("initialization needs nonzero variance");
  } else {
    g = initialize(data, config.fit.lambda_default);
    g = derive_primitive_stars(g, config.fit.mu_default);
  }
  return grow_from(data, config, std::move(g));
}

}  // namespace epg
