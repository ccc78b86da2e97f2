// optimizer.hpp — EM optimization of a principal graph with fixed structure.
//
// One EM step: partition the data by nearest node, assemble the quadratic
// system a = diag(|K_j|/|X|) + e + s from edges and stars, and solve
// a Y = B for the new node positions (one right-hand side per ambient
// dimension; a single factorization serves them all). Iterating to
// convergence per softening stage gives the fit.
#pragma once

#include <utility>
#include <vector>

#include "epg/energy.hpp"
#include "epg/graph.hpp"
#include "epg/linalg.hpp"

namespace epg {

struct SystemMatrices {
  Matrix e;  // from edges; symmetric, zero row sums
  Matrix s;  // from stars; symmetric, zero row sums
  Matrix a;  // |K_j| delta_js / |X| + e + s
};

struct Partition {
  std::vector<int> assignment;  // data index -> node index
  std::vector<long> counts;     // per node
};

struct FitConfig {
  double lambda_default = 0.01;
  double mu_default = 0.1;
  // (lambda multiplier, mu multiplier) per stage; high bending first keeps
  // the graph stiff while the rough shape settles, then relaxes.
  std::vector<std::pair<double, double>> softening = {{1.0, 100.0}, {1.0, 10.0}, {1.0, 1.0}};
  int max_iterations = 100;
  double convergence_tol = 1e-4;  // of the data bounding-box diameter
  double ridge = 1e-12;           // applied only if the solve reports singularity
  bool zero_lambda_after_fit = false;
};

// Per-stage energy series, for convergence diagnostics and the
// monotonicity checks in the tests.
struct FitLog {
  struct Stage {
    double lambda_scale = 1.0;
    double mu_scale = 1.0;
    std::vector<double> energies;  // total energy at stage moduli, start + per iteration
    int iterations = 0;
  };
  std::vector<Stage> stages;
  int total_iterations = 0;
};

// s picks up, per k-star with modulus mu, center N0 and leaves N1..Nk:
//   s[N0][N0] += mu;  s[Nl][Nm] += mu/k^2;  s[N0][Nl] -= mu/k (both sides)
// so that U_R(Y) = tr(Y^T s Y).
inline Matrix build_star_matrix(const ElasticGraph& g) {
  const std::size_t n = std::size_t(g.node_count());
  Matrix s(n, n);
  for (const auto& st : g.stars) {
    const double k = double(st.leaves.size());
    const double mu = st.mu;
    s(st.center, st.center) += mu;
    for (int l : st.leaves) {
      s(st.center, l) -= mu / k;
      s(l, st.center) -= mu / k;
      for (int m2 : st.leaves) s(l, m2) += mu / (k * k);
    }
  }
  return s;
}

// e picks up, per edge (k1,k2) with modulus lambda:
//   e[k1][k1] += lambda; e[k2][k2] += lambda; e[k1][k2] -= lambda (both sides)
// so that U_E(Y) = tr(Y^T e Y).
inline Matrix build_edge_matrix(const ElasticGraph& g) {
  const std::size_t n = std::size_t(g.node_count());
  Matrix e(n, n);
  for (const auto& ed : g.edges) {
    e(ed.a, ed.a) += ed.lambda;
    e(ed.b, ed.b) += ed.lambda;
    e(ed.a, ed.b) -= ed.lambda;
    e(ed.b, ed.a) -= ed.lambda;
  }
  return e;
}

// Nearest-node assignment; ties go to the lowest node index.
inline Partition partition(const DataSet& data, const ElasticGraph& g) {
  if (data.size() == 0) throw data_error("empty dataset");
  if (data.dim != g.dim) throw data_error("dataset and graph dimensions differ");
  const int k = g.node_count();
  Partition p;
  p.assignment.resize(std::size_t(data.size()));
  p.counts.assign(std::size_t(k), 0);
  for (long i = 0; i < data.size(); ++i) {
    auto x = data.point(i);
    int best = 0;
    double best_d = sq_dist(x, g.node(0));
    for (int v = 1; v < k; ++v) {
      double d = sq_dist(x, g.node(v));
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    p.assignment[std::size_t(i)] = best;
    ++p.counts[std::size_t(best)];
  }
  return p;
}

inline SystemMatrices assemble_system(const DataSet& data, const ElasticGraph& g,
                                      const Partition& p) {
  SystemMatrices m;
  m.e = build_edge_matrix(g);
  m.s = build_star_matrix(g);
  const std::size_t k = std::size_t(g.node_count());
  m.a = Matrix(k, k);
  const double inv_n = 1.0 / double(data.size());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      m.a(i, j) = m.e(i, j) + m.s(i, j) + (i == j ? double(p.counts[i]) * inv_n : 0.0);
  return m;
}

// One EM step: recompute the partition from the input positions, assemble
// the system, solve for the new positions. The solve uses the system
// scaled by |X| (diag(|K_j|) + |X|(e+s), right-hand side = raw cluster
// sums), which has the same solution and reduces bitwise to cluster means
// when all moduli are zero. If the plain factorization reports a singular
// system (all moduli zero and some cluster empty), a ridge of
// ridge*trace/k is added to the diagonal, anchored at the previous
// positions so uncoupled nodes stay where they were.
inline ElasticGraph em_step(const DataSet& data, const ElasticGraph& g, double ridge = 1e-12) {
  const int k = g.node_count();
  const int m = g.dim;
  const double n = double(data.size());
  Partition p = partition(data, g);

  Matrix e = build_edge_matrix(g);
  Matrix s = build_star_matrix(g);
  Matrix a{std::size_t(k), std::size_t(k)};
  for (std::size_t i = 0; i < std::size_t(k); ++i)
    for (std::size_t j = 0; j < std::size_t(k); ++j)
      a(i, j) = n * (e(i, j) + s(i, j)) + (i == j ? double(p.counts[i]) : 0.0);

  Matrix rhs{std::size_t(k), std::size_t(m)};
  for (long i = 0; i < data.size(); ++i) {
    auto x = data.point(i);
    auto row = rhs.row(std::size_t(p.assignment[std::size_t(i)]));
    for (int j = 0; j < m; ++j) row[std::size_t(j)] += x[std::size_t(j)];
  }

  LdltSolver solver;
  if (!solver.factor(a)) {
    const double delta = ridge * trace(a) / double(k);
    Matrix a2 = a;
    for (int i = 0; i < k; ++i) {
      a2(std::size_t(i), std::size_t(i)) += delta;
      auto y_old = g.node(i);
      auto row = rhs.row(std::size_t(i));
      for (int j = 0; j < m; ++j) row[std::size_t(j)] += delta * y_old[std::size_t(j)];
    }
    if (!solver.factor(a2))
      throw numeric_error("EM system singular after ridge regularization");
  }
  solver.solve(rhs);

  ElasticGraph out = g;
  for (int i = 0; i < k; ++i) {
    auto row = rhs.row(std::size_t(i));
    auto dst = out.node(i);
    for (int j = 0; j < m; ++j) dst[std::size_t(j)] = row[std::size_t(j)];
  }
  return out;
}

namespace detail {
inline ElasticGraph scale_moduli(const ElasticGraph& g, double lambda_scale, double mu_scale) {
  ElasticGraph out = g;
  for (auto& e : out.edges) e.lambda *= lambda_scale;
  for (auto& s : out.stars) s.mu *= mu_scale;
  return out;
}

inline double max_node_displacement(const ElasticGraph& before, const ElasticGraph& after) {
  double worst = 0.0;
  for (int i = 0; i < before.node_count(); ++i)
    worst = std::max(worst, sq_dist(before.node(i), after.node(i)));
  return std::sqrt(worst);
}
}  // namespace detail

// Runs the EM loop once per softening stage, carrying positions across
// stages. Convergence inside a stage: max node displacement below
// convergence_tol * data bounding-box diameter, or max_iterations.
// The returned graph keeps the input moduli (softening scales copies).
inline ElasticGraph fit(const DataSet& data, const ElasticGraph& graph, const FitConfig& config,
                        FitLog* log = nullptr) {
  if (data.size() == 0) throw data_error("empty dataset");
  if (!(config.convergence_tol > 0.0)) throw data_error("convergence_tol must be positive");
  for (std::size_t i = 1; i < config.softening.size(); ++i)
    if (config.softening[i].second > config.softening[i - 1].second)
      throw data_error("softening mu multipliers must be non-increasing");
  const double tol = config.convergence_tol * bounding_box_diameter(data);
  std::vector<std::pair<double, double>> stages = config.softening;
  if (stages.empty()) stages.push_back({1.0, 1.0});

  ElasticGraph current = graph;
  for (const auto& [ls, ms] : stages) {
    ElasticGraph staged = detail::scale_moduli(current, ls, ms);
    FitLog::Stage stage_log;
    stage_log.lambda_scale = ls;
    stage_log.mu_scale = ms;
    if (log) stage_log.energies.push_back(total_energy(data, staged).total);
    for (int it = 0; it < config.max_iterations; ++it) {
      ElasticGraph next = em_step(data, staged, config.ridge);
      const double moved = detail::max_node_displacement(staged, next);
      staged = std::move(next);
      ++stage_log.iterations;
      if (log) stage_log.energies.push_back(total_energy(data, staged).total);
      if (moved < tol) break;
    }
    current.coords = staged.coords;
    if (log) {
      log->total_iterations += stage_log.iterations;
      log->stages.push_back(std::move(stage_log));
    }
  }
  if (config.zero_lambda_after_fit)
    for (auto& e : current.edges) e.lambda = 0.0;
  return current;
}

}  // namespace epg
