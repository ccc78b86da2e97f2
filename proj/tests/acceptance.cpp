// acceptance.cpp — end-to-end acceptance suite.
//
// Each test prints exactly one line, "criterion NN: PASS|FAIL ...", and
// fails the doctest case when the criterion does not hold. Criteria 10
// and parts of 11 need the UCI wine/abalone files; with a cold cache and
// no network they report FAIL with the diagnostic instead of crashing.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>

#include "epg/cli.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace epg;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int criterion, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", criterion, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
}

int run(std::vector<std::string> args) {
  std::vector<const char*> argv{"epg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(int(argv.size()), argv.data());
}

std::string uci_cache_dir() {
  if (const char* env = std::getenv("EPG_UCI_CACHE")) return env;
  return "data/uci";  // the bundled cache at the repo root
}

char fmt_buf[256];
std::string fmt(const char* pattern, double a, double b = 0.0) {
  std::snprintf(fmt_buf, sizeof(fmt_buf), pattern, a, b);
  return fmt_buf;
}

}  // namespace

TEST_CASE("criterion 1: pluriharmonic placement gives zero bending energy and zero GC") {
  Timer timer;
  SplitMix64 rng(20120601);
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + int(rng.next() % 23);
    const int dim = 2 + int(rng.next() % 3);
    auto g = oracle::harmonic_tree(rng, n, dim, 0.25 + rng.uniform());
    const double scale =
        std::max(sq(embedding_diameter(g)), 1e-30) * std::max<double>(1.0, double(g.stars.size()));
    if (!(bending_energy(g) <= 1e-12 * scale)) ok = false;
    if (!(geometrical_complexity(g) <= 1e-12 * scale * sq(double(n)))) ok = false;
    if (!is_pluriharmonic(g, 1e-10)) ok = false;
  }
  const double sec = timer.seconds();
  if (sec >= 1.0) ok = false;
  report(1, ok, fmt("100 random harmonic trees, U_R <= 1e-12 rel, %.2fs (budget 1s)", sec));
  CHECK(ok);
}

TEST_CASE("criterion 2: em_step solves the fixed-partition quadratic to 1e-6 relative gradient") {
  Timer timer;
  SplitMix64 rng(20120602);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n_nodes = 3 + int(rng.next() % 18);   // <= 20
    const int n_points = 20 + int(rng.next() % 181);  // <= 200
    const int m = 2 + int(rng.next() % 4);            // <= 5
    auto data = fixtures::random_cloud(rng, n_points, m);
    ElasticGraph g;
    g.dim = m;
    for (int i = 0; i < n_nodes * m; ++i) g.coords.push_back(rng.uniform() * 2 - 1);
    const double lambda = 0.01 + rng.uniform();
    const double mu = 0.01 + rng.uniform();
    for (auto [a, b] : oracle::random_tree_edges(rng, n_nodes)) g.edges.push_back({a, b, lambda});
    g = derive_primitive_stars(g, mu);

    auto part = partition(data, g);
    auto quad = [&](const std::vector<double>& flat) {
      ElasticGraph h = g;
      h.coords = flat;
      double msd = 0.0;
      for (long i = 0; i < data.size(); ++i) {
        const int v = part.assignment[std::size_t(i)];
        double d2 = 0.0;
        for (int j = 0; j < m; ++j)
          d2 += sq(data.points[std::size_t(i) * m + j] - h.coords[std::size_t(v) * m + j]);
        msd += d2;
      }
      return msd / double(data.size()) + oracle::naive_stretching(h) + oracle::naive_bending(h);
    };
    auto solved = em_step(data, g);
    auto g0 = oracle::central_gradient(quad, g.coords, 1e-6);
    auto g1 = oracle::central_gradient(quad, solved.coords, 1e-6);
    double norm0 = 0.0, norm1 = 0.0;
    for (double v : g0) norm0 = std::max(norm0, std::abs(v));
    for (double v : g1) norm1 = std::max(norm1, std::abs(v));
    const double rel = norm1 / std::max(norm0, 1.0);
    worst = std::max(worst, rel);
    if (!(rel <= 1e-6)) ok = false;
  }
  const double sec = timer.seconds();
  if (sec >= 10.0) ok = false;
  report(2, ok, fmt("50 instances, worst relative gradient %.2e, %.2fs (budget 10s)", worst, sec));
  CHECK(ok);
}

TEST_CASE("criterion 3: total energy is non-increasing along every fit run") {
  Timer timer;
  SplitMix64 rng(20120603);
  bool ok = true;
  int runs = 0;
  auto check_log = [&](const FitLog& log) {
    for (const auto& stage : log.stages)
      for (std::size_t i = 1; i < stage.energies.size(); ++i)
        if (!(stage.energies[i] <= stage.energies[i - 1] * (1.0 + 1e-10) + 1e-300)) ok = false;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const int n_nodes = 3 + int(rng.next() % 10);
    auto data = fixtures::random_cloud(rng, 40 + long(rng.next() % 120), 2);
    ElasticGraph g;
    g.dim = 2;
    for (int i = 0; i < n_nodes * 2; ++i) g.coords.push_back(rng.uniform() * 2 - 1);
    for (auto [a, b] : oracle::random_tree_edges(rng, n_nodes))
      g.edges.push_back({a, b, 0.001 + rng.uniform() * 0.2});
    g = derive_primitive_stars(g, 0.01 + rng.uniform());
    FitConfig cfg;
    if (trial % 3 == 1) cfg.softening = {{1.0, 1.0}};
    if (trial % 3 == 2) cfg.softening = {{1.0, 1000.0}, {1.0, 30.0}, {1.0, 1.0}};
    FitLog log;
    fit(data, g, cfg, &log);
    check_log(log);
    ++runs;
  }
  report(3, ok, fmt("%.0f fit runs, per-stage slack 1e-10 relative, %.2fs", double(runs), timer.seconds()));
  CHECK(ok);
}

TEST_CASE("criterion 4: points grammar with zero moduli reproduces Lloyd assignments exactly") {
  Timer timer;
  SplitMix64 rng(20120604);
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const long n_points = 20 + long(rng.next() % 81);  // <= 100
    const int k = 2 + int(rng.next() % 4);             // <= 5
    auto data = fixtures::random_cloud(rng, n_points, 2);
    ElasticGraph g;
    g.dim = 2;
    for (int c = 0; c < k; ++c) {
      const long pick = long(rng.next() % std::uint64_t(n_points));
      g.add_node(data.point(pick));
    }
    FitConfig cfg;
    cfg.softening = {{1.0, 1.0}};
    cfg.max_iterations = 500;
    cfg.convergence_tol = 1e-15;
    auto fitted = fit(data, g, cfg);
    auto ref = oracle::lloyd_kmeans(data, g.coords, k);
    if (partition(data, fitted).assignment != ref.assignment) ok = false;
  }
  report(4, ok, fmt("20 seeded instances, assignment-level equality, %.2fs", timer.seconds()));
  CHECK(ok);
}

TEST_CASE("criterion 5: fit energy within 1e-3 of a general-purpose minimizer on tiny instances") {
  Timer timer;
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    GeneratorSpec spec;
    spec.shape = trial % 2 ? Shape::star : Shape::linear;
    spec.n_points = 10;
    spec.noise_sd = 0.08;
    spec.seed = 1000 + std::uint64_t(trial);
    spec.branches = 3;
    auto data = generate(spec);
    auto seg = initialize(data, 0.3);
    ElasticGraph g;
    g.dim = 2;
    for (int i = 0; i < 4; ++i) {
      const double t = double(i) / 3.0;
      g.add_node(std::vector<double>{seg.node(0)[0] * (1 - t) + seg.node(1)[0] * t,
                                     seg.node(0)[1] * (1 - t) + seg.node(1)[1] * t});
    }
    for (int i = 0; i + 1 < 4; ++i) g.edges.push_back({i, i + 1, 0.3});
    g = derive_primitive_stars(g, 1.0);
    FitConfig cfg;
    cfg.max_iterations = 500;
    cfg.convergence_tol = 1e-13;
    const double em_energy = total_energy(data, fit(data, g, cfg)).total;

    auto objective = [&](const std::vector<double>& flat) {
      ElasticGraph h = g;
      h.coords = flat;
      return oracle::brute_msd_node(data, h) + oracle::naive_stretching(h) +
             oracle::naive_bending(h);
    };
    auto best = oracle::nelder_mead(objective, g.coords, 0.15, 20000, 0);
    const double nm_energy = objective(best);
    const double rel = (em_energy - nm_energy) / std::max(std::abs(nm_energy), 1e-12);
    worst = std::max(worst, rel);
    if (!(rel <= 1e-3)) ok = false;
  }
  const double sec = timer.seconds();
  if (sec >= 30.0) ok = false;
  report(5, ok, fmt("10 tiny instances, worst excess %.2e, %.2fs (budget 30s)", worst, sec));
  CHECK(ok);
}

namespace {
BuilderConfig acceptance_builder(int cc_max) {
  BuilderConfig cfg;
  cfg.cc_max = cc_max;
  cfg.fve_stop = 2.0;
  return cfg;
}
}  // namespace

TEST_CASE("criterion 6: linear data keeps GC near zero and a star-free barcode") {
  Timer timer;
  GeneratorSpec spec;  // generator parameters fixed by the repo
  spec.shape = Shape::linear;
  spec.n_points = 300;
  spec.noise_sd = 0.02;
  spec.seed = 42;
  auto data = generate(spec);
  auto trace = grow(data, acceptance_builder(40));
  double max_gc = 0.0;
  for (const auto& r : trace.records) max_gc = std::max(max_gc, r.gc);
  bool ok = max_gc > 0.0;
  for (const auto& r : trace.records) {
    if (r.fve_polyline < 0.95 && !(r.gc < 0.01 * max_gc)) ok = false;
    if (r.fve_polyline < 0.98 && !r.bar.star_counts.empty()) ok = false;
  }
  report(6, ok, fmt("40-step linear trace, max GC %.3g, %.2fs", max_gc, timer.seconds()));
  CHECK(ok);
}

TEST_CASE("criterion 7: the tree grammar reaches FVE 0.90 with fewer nodes than the curve grammar") {
  Timer timer;
  GeneratorSpec spec;
  spec.shape = Shape::star;
  spec.branches = 3;
  spec.n_points = 300;
  spec.noise_sd = 0.05;
  spec.seed = 42;
  auto data = generate(spec);

  auto tree_trace = grow(data, acceptance_builder(30));
  BuilderConfig curve_cfg = acceptance_builder(30);
  curve_cfg.grammar_sequence = {"curve"};
  auto curve_trace = grow(data, curve_cfg);

  auto first_at = [](const Trace& t, double fve_target) {
    for (const auto& r : t.records)
      if (r.fve_polyline >= fve_target) return r;
    return t.records.back();
  };
  auto tree_hit = first_at(tree_trace, 0.90);
  auto curve_hit = first_at(curve_trace, 0.90);
  bool ok = tree_hit.fve_polyline >= 0.90 && curve_hit.fve_polyline >= 0.90;
  if (!(tree_hit.node_count < curve_hit.node_count)) ok = false;
  // the winning tree structure is a single 3-star: barcode "1||k"
  if (!(tree_hit.bar.star_counts.size() == 1 && tree_hit.bar.star_counts[0] == 1)) ok = false;
  report(7, ok,
         fmt("tree reaches FVE 0.90 at %.0f nodes vs curve at %.0f", double(tree_hit.node_count),
             double(curve_hit.node_count)) +
             " (tree barcode " + tree_hit.bar.str() + "), " + fmt("%.2fs", timer.seconds()));
  CHECK(ok);
}

TEST_CASE("criterion 8: cartesian product counts and the per-copy energy sum") {
  Timer timer;
  bool ok = true;
  auto path_factor = [](int n, int axis) {
    ElasticGraph g;
    g.dim = 2;
    for (int i = 0; i < n; ++i) {
      std::vector<double> p(2, 0.0);
      p[std::size_t(axis)] = double(i);
      g.add_node(p);
    }
    for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1, 0.7});
    return derive_primitive_stars(g, 0.4);
  };
  auto p23 = cartesian_product({path_factor(2, 0), path_factor(3, 1)});
  if (p23.product.node_count() != 6 || p23.product.edges.size() != 7 ||
      p23.product.stars.size() != 2)
    ok = false;
  auto p33 = cartesian_product({path_factor(3, 0), path_factor(3, 1)});
  if (p33.product.node_count() != 9 || p33.product.edges.size() != 12 ||
      p33.product.stars.size() != 6)
    ok = false;

  SplitMix64 rng(20120608);
  for (int trial = 0; trial < 5; ++trial) {
    auto cc = trial % 2 ? p33 : p23;
    for (auto& v : cc.product.coords) v = rng.uniform() * 4 - 2;
    try {
      const double checked = product_energy_check(cc);  // throws beyond 1e-12 relative
      const double naive = oracle::naive_stretching(cc.product) + oracle::naive_bending(cc.product);
      if (std::abs(checked - naive) > 1e-12 * std::max(std::abs(naive), 1e-30)) ok = false;
    } catch (const numeric_error&) {
      ok = false;
    }
  }
  const double sec = timer.seconds();
  if (sec >= 1.0) ok = false;
  report(8, ok, fmt("P2xP3 6/7/2, P3xP3 9/12/6, copy-sum identity, %.2fs (budget 1s)", sec));
  CHECK(ok);
}

TEST_CASE("criterion 9: barcode rendering is byte-exact") {
  // 15 nodes: two 4-stars sharing their leaves, a K_{3,3} of 3-stars,
  // and three isolated vertices.
  ElasticGraph g;
  g.dim = 2;
  for (int i = 0; i < 15; ++i) g.add_node(std::vector<double>{double(i), 0.0});
  for (int l = 2; l < 6; ++l) {
    g.edges.push_back({0, l, 1.0});
    g.edges.push_back({1, l, 1.0});
  }
  for (int a = 6; a < 9; ++a)
    for (int b = 9; b < 12; ++b) g.edges.push_back({a, b, 1.0});
  g = derive_primitive_stars(g, 1.0);
  const std::string big = barcode(g).str();

  ElasticGraph star;
  star.dim = 2;
  star.add_node(std::vector<double>{0.0, 0.0});
  for (int i = 0; i < 3; ++i) {
    star.add_node(std::vector<double>{std::cos(2.0 * i), std::sin(2.0 * i)});
    star.edges.push_back({0, i + 1, 1.0});
  }
  star = derive_primitive_stars(star, 1.0);
  const std::string small = barcode(star).str();

  const bool ok = big == "2|6||15" && small == "1||4";
  report(9, ok, "\"" + big + "\" and \"" + small + "\" (expect 2|6||15 and 1||4)");
  CHECK(ok);
}

TEST_CASE("criterion 10: UCI wine and abalone qualitative reproduction (soft, preprocessing-sensitive)") {
  Timer timer;
  bool ok = true;
  std::string note;
  try {
    auto wine = standardize(fetch_uci("wine", uci_cache_dir()));
    auto wine_trace = grow(wine, acceptance_builder(20));
    bool wine_star = false;
    for (const auto& r : wine_trace.records)
      if (r.node_count <= 6 && !r.bar.star_counts.empty() && r.bar.star_counts[0] >= 1)
        wine_star = true;
    if (!wine_star) ok = false;
    note += "wine 3-star at <=6 nodes: " + std::string(wine_star ? "yes" : "NO");
  } catch (const data_error& e) {
    ok = false;
    note += std::string("wine unavailable (") + e.what() + ")";
  }
  try {
    auto abalone = standardize(fetch_uci("abalone", uci_cache_dir()));
    BuilderConfig ab_cfg = acceptance_builder(50);
    ab_cfg.fve_stop = 0.999;
    auto ab_trace = grow(abalone, ab_cfg);
    bool ab_linear = true;
    for (const auto& r : ab_trace.records)
      if (r.fve_polyline < 0.9 && !r.bar.star_counts.empty()) ab_linear = false;
    if (!ab_linear) ok = false;
    note += std::string("; abalone star-free below FVE 0.9: ") + (ab_linear ? "yes" : "NO");
  } catch (const data_error& e) {
    ok = false;
    note += std::string("; abalone unavailable (") + e.what() + ")";
  }
  const double sec = timer.seconds();
  if (sec >= 300.0) ok = false;
  note += fmt("; %.1fs (budget 300s)", sec);
  report(10, ok, note);
  CHECK(ok);
}

TEST_CASE("criterion 11: pipelines from criteria 6-10 are byte-deterministic") {
  Timer timer;
  auto dir = fixtures::fresh_dir("acceptance_det");
  bool ok = true;
  std::string covered;

  auto run_twice = [&](const std::string& tag, std::vector<std::string> fit_args) {
    auto t1 = (dir / (tag + "_1.csv")).string();
    auto t2 = (dir / (tag + "_2.csv")).string();
    auto a1 = fit_args, a2 = fit_args;
    a1.insert(a1.end(), {"--trace", t1});
    a2.insert(a2.end(), {"--trace", t2});
    if (run(a1) != 0 || run(a2) != 0) return false;
    return fixtures::slurp(t1) == fixtures::slurp(t2) && !fixtures::slurp(t1).empty();
  };

  auto linear_csv = (dir / "linear.csv").string();
  if (run({"generate", "--shape", "linear", "--points", "300", "--noise", "0.02", "--seed", "42",
           "--out", linear_csv}) != 0)
    ok = false;
  if (!run_twice("linear", {"fit", "--data", linear_csv, "--max-ops", "40", "--fve-stop", "2"}))
    ok = false;
  covered += "linear";

  auto star_csv = (dir / "star.csv").string();
  if (run({"generate", "--shape", "star", "--branches", "3", "--points", "300", "--noise", "0.05",
           "--seed", "42", "--out", star_csv}) != 0)
    ok = false;
  if (!run_twice("tree", {"fit", "--data", star_csv, "--max-ops", "30", "--fve-stop", "2"}))
    ok = false;
  if (!run_twice("curve", {"fit", "--data", star_csv, "--grammar", "curve", "--max-ops", "30",
                           "--fve-stop", "2"}))
    ok = false;
  covered += ", star tree+curve";

  // UCI pipelines join the determinism check when their data is present.
  try {
    auto wine_csv = (dir / "wine.csv").string();
    fetch_uci("wine", uci_cache_dir(), /*allow_network=*/false);
    if (run({"fetch", "--name", "wine", "--cache", uci_cache_dir(), "--offline", "--out",
             wine_csv}) != 0)
      ok = false;
    if (!run_twice("wine", {"fit", "--data", wine_csv, "--standardize", "--max-ops", "20",
                            "--fve-stop", "2"}))
      ok = false;
    covered += ", wine";
  } catch (const data_error&) {
    covered += "; wine skipped (data unavailable, see criterion 10)";
  }
  try {
    auto abalone_csv = (dir / "abalone.csv").string();
    fetch_uci("abalone", uci_cache_dir(), /*allow_network=*/false);
    if (run({"fetch", "--name", "abalone", "--cache", uci_cache_dir(), "--offline", "--out",
             abalone_csv}) != 0)
      ok = false;
    if (!run_twice("abalone", {"fit", "--data", abalone_csv, "--standardize", "--max-ops", "50"}))
      ok = false;
    covered += ", abalone";
  } catch (const data_error&) {
    covered += "; abalone skipped (data unavailable, see criterion 10)";
  }

  report(11, ok, covered + fmt(", %.1fs", timer.seconds()));
  CHECK(ok);
}
