// energy.hpp — elastic energies, approximation error, and the
// geometrical-complexity measure.
//
// The fitting functional is
//   U(X,G) = MSD(X,G) + U_E(G) + U_R(G)
// where MSD uses nearest-node distances (the optimizer's partition is a
// vertex partition). Polyline MSD projects onto edge segments as well and
// is used for reporting (FVE) only.
#pragma once

#include <cmath>
#include <limits>

#include "epg/dataset.hpp"
#include "epg/graph.hpp"

namespace epg {

struct EnergyBreakdown {
  double stretching = 0.0;  // U_E
  double bending = 0.0;     // U_R
  double msd = 0.0;         // nearest-node MSD
  double total = 0.0;       // msd + stretching + bending
};

struct AccuracyReport {
  double fve_node = 0.0;      // 1 - nearest-node MSE / variance
  double fve_polyline = 0.0;  // 1 - polyline MSE / variance
  double total_variance = 0.0;
};

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += sq(a[j] - b[j]);
  return s;
}

// U_E: sum over edges of lambda * ||phi(a) - phi(b)||^2.
inline double stretching_energy(const ElasticGraph& g) {
  KahanSum acc;
  for (const auto& e : g.edges) acc.add(e.lambda * sq_dist(g.node(e.a), g.node(e.b)));
  return acc.value();
}

// U_R: sum over stars of mu * ||phi(center) - mean(phi(leaves))||^2.
// force_unit_mu evaluates the same sum with every modulus at 1, which is
// what the complexity measure uses.
inline double bending_energy(const ElasticGraph& g, bool force_unit_mu = false) {
  KahanSum acc;
  std::vector<double> mean(std::size_t(g.dim));
  for (const auto& s : g.stars) {
    std::fill(mean.begin(), mean.end(), 0.0);
    for (int l : s.leaves) {
      auto p = g.node(l);
      for (int j = 0; j < g.dim; ++j) mean[std::size_t(j)] += p[std::size_t(j)];
    }
    const double inv_k = 1.0 / double(s.leaves.size());
    auto c = g.node(s.center);
    double dev = 0.0;
    for (int j = 0; j < g.dim; ++j) dev += sq(c[std::size_t(j)] - mean[std::size_t(j)] * inv_k);
    acc.add((force_unit_mu ? 1.0 : s.mu) * dev);
  }
  return acc.value();
}

// Bounding-box diagonal of the node embedding, the length scale for
// relative pluriharmonicity tests.
inline double embedding_diameter(const ElasticGraph& g) {
  if (g.node_count() == 0) return 0.0;
  std::vector<double> lo(std::size_t(g.dim), std::numeric_limits<double>::infinity());
  std::vector<double> hi(std::size_t(g.dim), -std::numeric_limits<double>::infinity());
  for (int i = 0; i < g.node_count(); ++i) {
    auto p = g.node(i);
    for (int j = 0; j < g.dim; ++j) {
      lo[std::size_t(j)] = std::min(lo[std::size_t(j)], p[std::size_t(j)]);
      hi[std::size_t(j)] = std::max(hi[std::size_t(j)], p[std::size_t(j)]);
    }
  }
  double s = 0.0;
  for (int j = 0; j < g.dim; ++j) s += sq(hi[std::size_t(j)] - lo[std::size_t(j)]);
  return std::sqrt(s);
}

// True iff every selected star's center sits at its leaf mean within
// tol * embedding diameter. A graph with no stars is vacuously
// pluriharmonic.
inline bool is_pluriharmonic(const ElasticGraph& g, double tol) {
  const double scale = std::max(embedding_diameter(g), 1e-300);
  std::vector<double> mean(std::size_t(g.dim));
  for (const auto& s : g.stars) {
    std::fill(mean.begin(), mean.end(), 0.0);
    for (int l : s.leaves) {
      auto p = g.node(l);
      for (int j = 0; j < g.dim; ++j) mean[std::size_t(j)] += p[std::size_t(j)];
    }
    const double inv_k = 1.0 / double(s.leaves.size());
    auto c = g.node(s.center);
    double dev = 0.0;
    for (int j = 0; j < g.dim; ++j) dev += sq(c[std::size_t(j)] - mean[std::size_t(j)] * inv_k);
    if (std::sqrt(dev) > tol * scale) return false;
  }
  return true;
}

// Mean over data points of the squared distance to the closest node.
inline double msd_nearest_node(const DataSet& data, const ElasticGraph& g) {
  if (data.size() == 0) throw data_error("empty dataset");
  if (data.dim != g.dim) throw data_error("dataset and graph dimensions differ");
  if (g.node_count() == 0) throw data_error("graph has no nodes");
  KahanSum acc;
  for (long i = 0; i < data.size(); ++i) {
    auto x = data.point(i);
    double best = std::numeric_limits<double>::infinity();
    for (int v = 0; v < g.node_count(); ++v) best = std::min(best, sq_dist(x, g.node(v)));
    acc.add(best);
  }
  return acc.value() / double(data.size());
}

// Squared distance from point x to segment [p, q], clamped to endpoints.
inline double sq_dist_point_segment(std::span<const double> x, std::span<const double> p,
                                    std::span<const double> q) {
  double qp2 = 0.0, dot = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double d = q[j] - p[j];
    qp2 += d * d;
    dot += (x[j] - p[j]) * d;
  }
  double t = qp2 > 0.0 ? std::clamp(dot / qp2, 0.0, 1.0) : 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += sq(x[j] - (p[j] + t * (q[j] - p[j])));
  return s;
}

// Mean squared distance to the union of nodes and edge segments.
inline double msd_polyline(const DataSet& data, const ElasticGraph& g) {
  if (data.size() == 0) throw data_error("empty dataset");
  if (data.dim != g.dim) throw data_error("dataset and graph dimensions differ");
  if (g.node_count() == 0) throw data_error("graph has no nodes");
  KahanSum acc;
  for (long i = 0; i < data.size(); ++i) {
    auto x = data.point(i);
    double best = std::numeric_limits<double>::infinity();
    for (int v = 0; v < g.node_count(); ++v) best = std::min(best, sq_dist(x, g.node(v)));
    for (const auto& e : g.edges)
      best = std::min(best, sq_dist_point_segment(x, g.node(e.a), g.node(e.b)));
    acc.add(best);
  }
  return acc.value() / double(data.size());
}

inline EnergyBreakdown total_energy(const DataSet& data, const ElasticGraph& g) {
  EnergyBreakdown out;
  out.msd = msd_nearest_node(data, g);
  out.stretching = stretching_energy(g);
  out.bending = bending_energy(g);
  out.total = out.msd + out.stretching + out.bending;
  return out;
}

inline AccuracyReport fve(const DataSet& data, const ElasticGraph& g) {
  if (data.size() < 2) throw data_error("FVE needs at least two data points");
  AccuracyReport rep;
  rep.total_variance = total_variance(data);
  if (rep.total_variance <= 0.0) throw data_error("FVE undefined for zero-variance data");
  rep.fve_node = 1.0 - msd_nearest_node(data, g) / rep.total_variance;
  rep.fve_polyline = 1.0 - msd_polyline(data, g) / rep.total_variance;
  return rep;
}

// GC = N_nodes^2 * U_R evaluated with all star moduli at 1, decoupling the
// measure from whatever moduli the fit used.
inline double geometrical_complexity(const ElasticGraph& g) {
  const double n = double(g.node_count());
  return n * n * bending_energy(g, /*force_unit_mu=*/true);
}

}  // namespace epg
