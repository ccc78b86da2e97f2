// cli.hpp — the epg command line: generate, fit, report, product, fetch.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.
// Every option can also come from a key=value config file (--config);
// explicit flags override file values. Outputs carry no timestamps, so
// identical inputs give byte-identical files.
#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epg/builder.hpp"
#include "epg/complex.hpp"
#include "epg/csv.hpp"
#include "epg/generators.hpp"
#include "epg/graph_json.hpp"
#include "epg/svg.hpp"
#include "epg/trace_io.hpp"
#include "epg/uci.hpp"

namespace epg {

struct GenerateArgs {
  std::string shape;
  long points = 300;
  double noise = 0.05;
  int branches = 3;
  std::uint64_t seed = 0;
  std::string out;
};

inline void cmd_generate(const GenerateArgs& a) {
  GeneratorSpec spec;
  spec.shape = shape_from_name(a.shape);
  spec.n_points = a.points;
  spec.noise_sd = a.noise;
  spec.branches = a.branches;
  spec.seed = a.seed;
  write_csv(generate(spec), a.out);
}

struct FitArgs {
  std::string data;
  bool standardize_data = false;
  std::vector<std::string> select_columns;
  std::string grammar = "tree";
  std::vector<std::string> sequence;  // overrides the grammar preset mapping
  int max_ops = 50;
  long sc_max = 1000;
  long b_max = -1;  // >= 0 switches to the branch bound
  double lambda = 0.01;
  double mu = 0.1;
  std::vector<double> softening = {100.0, 10.0, 1.0};  // mu multipliers
  int iters = 100;
  double tol = 1e-4;
  int candidate_iters = 10;
  double fve_stop = 0.999;
  bool no_shrink_increase = false;
  bool zero_lambda = false;
  std::string out;
  std::string trace_path;
  std::string intermediate_dir;
};

inline BuilderConfig builder_config_from(const FitArgs& a) {
  BuilderConfig cfg;
  if (!a.sequence.empty()) {
    cfg.grammar_sequence = a.sequence;
  } else if (a.grammar == "tree") {
    cfg.grammar_sequence = {"tree", "tree", "shrink"};
  } else {
    cfg.grammar_sequence = {a.grammar};
  }
  for (const auto& preset : cfg.grammar_sequence) grammar_preset(preset);  // validate names
  if (a.b_max >= 0) {
    cfg.policy.kind = StructuralPolicy::Kind::branch_bound;
    cfg.policy.b_max = a.b_max;
  } else {
    cfg.policy.kind = StructuralPolicy::Kind::node_count_bound;
    cfg.policy.sc_max = a.sc_max;
  }
  cfg.cc_max = a.max_ops;
  cfg.fit.lambda_default = a.lambda;
  cfg.fit.mu_default = a.mu;
  cfg.fit.softening.clear();
  for (double m : a.softening) cfg.fit.softening.push_back({1.0, m});
  cfg.fit.max_iterations = a.iters;
  cfg.fit.convergence_tol = a.tol;
  cfg.fit.zero_lambda_after_fit = a.zero_lambda;
  cfg.candidate_fit_iterations = a.candidate_iters;
  cfg.fve_stop = a.fve_stop;
  cfg.allow_energy_increase_on_shrink = !a.no_shrink_increase;
  cfg.keep_graphs = true;
  return cfg;
}

inline void cmd_fit(const FitArgs& a) {
  CsvOptions opt;
  opt.select_columns = a.select_columns;
  DataSet data = load_csv(a.data, opt);
  if (a.standardize_data) data = standardize(data);
  BuilderConfig cfg = builder_config_from(a);
  Trace trace = grow(data, cfg);
  if (!a.trace_path.empty()) write_trace_csv(trace_to_records(trace), a.trace_path);
  if (!a.out.empty()) save_graph(trace.graphs.back(), a.out);
  if (!a.intermediate_dir.empty()) {
    std::filesystem::create_directories(a.intermediate_dir);
    for (std::size_t i = 0; i < trace.graphs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "step_%04zu.json", i);
      save_graph(trace.graphs[i], (std::filesystem::path(a.intermediate_dir) / name).string());
    }
  }
  const auto& last = trace.records.back();
  std::cout << "steps " << last.step << "  nodes " << last.node_count << "  barcode "
            << last.bar.str() << "  fve_polyline " << format_g17(last.fve_polyline) << "\n";
}

struct ReportArgs {
  std::string trace_path;
  std::string out;
  std::string minima_out;
  bool log_scale = false;
  std::vector<long> markers;
  std::string data;  // optional projection panel
  std::string graph;
  bool standardize_data = false;
};

inline void cmd_report(const ReportArgs& a) {
  auto rows = read_trace_csv(a.trace_path);
  PlotSpec spec;
  spec.log_scale = a.log_scale;
  spec.markers = a.markers;
  DataSet data;
  ElasticGraph g;
  if (!a.data.empty() && !a.graph.empty()) {
    data = load_csv(a.data);
    if (a.standardize_data) data = standardize(data);
    g = load_graph(a.graph);
    spec.projection_data = &data;
    spec.projection_graph = &g;
  }
  std::string svg = render_accuracy_complexity_svg(rows, spec);
  std::ofstream out(a.out);
  if (!out) throw data_error("cannot write " + a.out);
  out << svg;
  if (!a.minima_out.empty()) {
    std::ofstream mj(a.minima_out);
    if (!mj) throw data_error("cannot write " + a.minima_out);
    mj << local_minima_json(rows).dump(2) << '\n';
  }
}

struct ProductArgs {
  std::vector<std::string> factors;
  std::string out;
};

inline void cmd_product(const ProductArgs& a) {
  std::vector<ElasticGraph> factors;
  for (const auto& path : a.factors) factors.push_back(load_graph(path));
  CubicComplex cc = cartesian_product(factors);
  product_energy_check(cc);  // construction self-check
  save_graph(cc.product, a.out);
  std::cout << "product: " << cc.product.node_count() << " nodes, " << cc.product.edges.size()
            << " edges, " << cc.product.stars.size() << " stars\n";
}

struct FetchArgs {
  std::vector<std::string> names;
  std::string cache_dir = default_uci_cache_dir();
  bool offline = false;
  bool standardize_data = false;
  std::string out;  // CSV path, single dataset only
};

inline void cmd_fetch(const FetchArgs& a) {
  if (!a.out.empty() && a.names.size() != 1)
    throw data_error("--out requires exactly one --name");
  for (const auto& name : a.names) {
    DataSet d = fetch_uci(name, a.cache_dir, !a.offline);
    if (a.standardize_data) d = standardize(d);
    std::cout << name << ": " << d.size() << " points, " << d.dim << " columns";
    if (d.preprocessing.dropped_rows > 0)
      std::cout << " (" << d.preprocessing.dropped_rows << " rows dropped)";
    std::cout << "\n";
    if (!a.out.empty()) write_csv(d, a.out);
  }
}

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"elastic principal graphs: growth, complexity traces, plots"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file; subcommand options live in a [fit]/[generate]/... section");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "write a synthetic 2-D dataset as CSV");
  g->add_option("--shape", gen.shape, "linear | arc | star | treelike")->required();
  g->add_option("--points", gen.points, "number of points");
  g->add_option("--noise", gen.noise, "Gaussian scatter, in skeleton units");
  g->add_option("--branches", gen.branches, "branch count (star shape)");
  g->add_option("--seed", gen.seed, "PRNG seed");
  g->add_option("--out", gen.out, "output CSV path")->required();

  FitArgs fit_args;
  auto* f = app.add_subcommand("fit", "grow a principal graph and emit its trace");
  f->add_option("--data", fit_args.data, "input CSV")->required();
  f->add_flag("--standardize", fit_args.standardize_data, "z-score the columns first");
  f->add_option("--columns", fit_args.select_columns, "columns to keep")->delimiter(',');
  f->add_option("--grammar", fit_args.grammar, "tree | curve | points | shrink");
  f->add_option("--sequence", fit_args.sequence, "explicit grammar sequence")->delimiter(',');
  f->add_option("--max-ops", fit_args.max_ops, "construction-complexity cap");
  f->add_option("--sc-max", fit_args.sc_max, "node-count bound");
  f->add_option("--b-max", fit_args.b_max, "3-star bound (switches to the branch policy)");
  f->add_option("--lambda", fit_args.lambda, "edge stretching modulus");
  f->add_option("--mu", fit_args.mu, "star bending modulus");
  f->add_option("--softening", fit_args.softening, "mu multipliers, stiff to soft")->delimiter(',');
  f->add_option("--iters", fit_args.iters, "EM iterations per softening stage");
  f->add_option("--tol", fit_args.tol, "convergence tol (fraction of data diameter)");
  f->add_option("--candidate-iters", fit_args.candidate_iters, "EM cap while scoring candidates");
  f->add_option("--fve-stop", fit_args.fve_stop, "stop at this polyline FVE (>1 disables)");
  f->add_flag("--no-shrink-increase", fit_args.no_shrink_increase,
              "skip shrink steps that raise the energy");
  f->add_flag("--zero-lambda", fit_args.zero_lambda, "zero edge moduli after the final fit");
  f->add_option("--out", fit_args.out, "final graph JSON");
  f->add_option("--trace", fit_args.trace_path, "trace CSV");
  f->add_option("--intermediate-dir", fit_args.intermediate_dir, "write every step's graph here");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "render the accuracy-complexity plot as SVG");
  r->add_option("--trace", rep.trace_path, "trace CSV from fit")->required();
  r->add_option("--out", rep.out, "output SVG path")->required();
  r->add_option("--minima", rep.minima_out, "write GC local minima as JSON");
  r->add_flag("--log-scale", rep.log_scale, "log-scale GC axis");
  r->add_option("--marker", rep.markers, "highlight these steps");
  r->add_option("--data", rep.data, "dataset CSV for the projection panel");
  r->add_option("--graph", rep.graph, "graph JSON for the projection panel");
  r->add_flag("--standardize", rep.standardize_data, "z-score the panel data");

  ProductArgs prod;
  auto* p = app.add_subcommand("product", "Cartesian product of factor graphs");
  p->add_option("factors", prod.factors, "factor graph JSON files")->required()->expected(-1);
  p->add_option("--out", prod.out, "output graph JSON")->required();

  FetchArgs fetch;
  auto* u = app.add_subcommand("fetch", "download (or reuse) a UCI dataset");
  u->add_option("--name", fetch.names, "iris | wine | forestfires | abalone")->required();
  u->add_option("--cache", fetch.cache_dir, "cache directory (default $EPG_UCI_CACHE)");
  u->add_flag("--offline", fetch.offline, "fail instead of downloading");
  u->add_flag("--standardize", fetch.standardize_data, "z-score before --out");
  u->add_option("--out", fetch.out, "also write the ingested dataset as CSV");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*g) cmd_generate(gen);
    if (*f) cmd_fit(fit_args);
    if (*r) cmd_report(rep);
    if (*p) cmd_product(prod);
    if (*u) cmd_fetch(fetch);
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace epg
