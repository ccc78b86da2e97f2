// grammar.hpp — elementary graph transformations and candidate enumeration.
//
// Grow rules place the new node so the star it completes is pluriharmonic
// at the moment of insertion; EM then moves everything. Shrink rules trim
// leaves or fuse stars across a bridge edge. All results are primitive
// (stars rederived over full neighborhoods).
#pragma once

#include <string>
#include <vector>

#include "epg/graph.hpp"

namespace epg {

enum class RuleKind {
  add_node,               // new leaf attached to any vertex
  bisect_edge,            // split an edge at its midpoint
  remove_leaf,            // drop a degree-1 vertex
  remove_edge,            // drop an edge and fuse its endpoint stars
  add_terminal_node,      // add_node restricted to degree <= 1 vertices
  add_disconnected_node,  // new isolated node (k-means behavior)
};

inline const char* kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::add_node: return "add_node";
    case RuleKind::bisect_edge: return "bisect_edge";
    case RuleKind::remove_leaf: return "remove_leaf";
    case RuleKind::remove_edge: return "remove_edge";
    case RuleKind::add_terminal_node: return "add_terminal_node";
    case RuleKind::add_disconnected_node: return "add_disconnected_node";
  }
  return "?";
}

// Application site: v0 is the vertex for vertex rules, the first endpoint
// for bisect, and the surviving endpoint for remove_edge (v1 is removed).
struct GrammarOperation {
  RuleKind kind = RuleKind::add_node;
  int v0 = -1;
  int v1 = -1;

  bool operator==(const GrammarOperation&) const = default;
};

struct CandidateTransformation {
  GrammarOperation operation;
  ElasticGraph result;
  bool permissible = true;
};

// Structural-complexity filter for candidate results.
struct StructuralPolicy {
  enum class Kind { node_count_bound, branch_bound };
  Kind kind = Kind::node_count_bound;
  long sc_max = 1000;  // node bound
  long b_max = 0;      // allowed 3-stars under branch_bound

  // branch_bound: SC is |S3| when |S3| <= b_max and no star of order >= 4
  // exists, infinite otherwise.
  bool permits(const ElasticGraph& g) const {
    if (kind == Kind::node_count_bound) return g.node_count() <= sc_max;
    long three = 0;
    for (const auto& s : g.stars) {
      if (s.order() >= 4) return false;
      if (s.order() == 3) ++three;
    }
    return three <= b_max;
  }
};

// Adds z and edge (v, z). With u1..uk the neighbors of v before the edit,
// the star now centered at v is pluriharmonic when
//   phi(z) = (k+1) phi(v) - sum phi(u_i);
// a terminal v gives linear extrapolation, a star center may give a
// placement coincident with v (EM separates the nodes).
inline ElasticGraph apply_add_node(const ElasticGraph& g, int v, double lambda, double mu) {
  if (g.node_count() < 2) throw data_error("add_node needs a graph with at least two vertices");
  ElasticGraph out = g;
  auto adj = g.adjacency();
  const auto& nb = adj[std::size_t(v)];
  std::vector<double> z(std::size_t(g.dim));
  auto pv = g.node(v);
  for (int j = 0; j < g.dim; ++j) z[std::size_t(j)] = double(nb.size() + 1) * pv[std::size_t(j)];
  for (int u : nb) {
    auto pu = g.node(u);
    for (int j = 0; j < g.dim; ++j) z[std::size_t(j)] -= pu[std::size_t(j)];
  }
  out.add_node(z);
  out.edges.push_back({v, out.node_count() - 1, lambda});
  return derive_primitive_stars(out, mu);
}

// Replaces (v, v') with (v, z), (z, v'), z at the midpoint. The new edges
// inherit the bisected edge's modulus.
inline ElasticGraph apply_bisect_edge(const ElasticGraph& g, int a, int b, double mu) {
  auto it = std::find_if(g.edges.begin(), g.edges.end(), [&](const Edge& e) {
    return (e.a == a && e.b == b) || (e.a == b && e.b == a);
  });
  if (it == g.edges.end()) throw data_error("bisect_edge: no such edge");
  ElasticGraph out = g;
  const double lambda = it->lambda;
  out.edges.erase(out.edges.begin() + (it - g.edges.begin()));
  std::vector<double> z(std::size_t(g.dim));
  auto pa = g.node(a), pb = g.node(b);
  for (int j = 0; j < g.dim; ++j) z[std::size_t(j)] = 0.5 * (pa[std::size_t(j)] + pb[std::size_t(j)]);
  out.add_node(z);
  const int zi = out.node_count() - 1;
  out.edges.push_back({a, zi, lambda});
  out.edges.push_back({zi, b, lambda});
  return derive_primitive_stars(out, mu);
}

inline ElasticGraph apply_remove_leaf(const ElasticGraph& g, int v, double mu) {
  auto deg = g.degrees();
  if (v < 0 || v >= g.node_count() || deg[std::size_t(v)] != 1)
    throw data_error("remove_leaf: vertex is not a leaf");
  ElasticGraph out = g;
  out.remove_node(v);
  return derive_primitive_stars(out, mu);
}

// Deletes edge (v, v') and vertex v'; the other neighbors of v' reattach
// to v, merging the two stars into one centered at v. Both endpoints must
// be star centers (degree >= 2); the leaf case is remove_leaf's.
inline ElasticGraph apply_remove_edge(const ElasticGraph& g, int survivor, int removed, double mu) {
  auto deg = g.degrees();
  auto it = std::find_if(g.edges.begin(), g.edges.end(), [&](const Edge& e) {
    return (e.a == survivor && e.b == removed) || (e.a == removed && e.b == survivor);
  });
  if (it == g.edges.end()) throw data_error("remove_edge: no such edge");
  if (deg[std::size_t(survivor)] < 2 || deg[std::size_t(removed)] < 2)
    throw data_error("remove_edge: endpoint of degree 1 (use remove_leaf)");
  ElasticGraph out = g;
  out.edges.erase(out.edges.begin() + (it - g.edges.begin()));
  // Reattach, skipping neighbors already adjacent to the survivor.
  auto adj = out.adjacency();
  const auto& keep = adj[std::size_t(survivor)];
  for (int u : adj[std::size_t(removed)]) {
    if (u == survivor) continue;
    if (std::binary_search(keep.begin(), keep.end(), u)) continue;
    auto old = std::find_if(out.edges.begin(), out.edges.end(), [&](const Edge& e) {
      return (e.a == removed && e.b == u) || (e.a == u && e.b == removed);
    });
    const double lambda = old->lambda;
    out.edges.erase(old);
    out.edges.push_back({survivor, u, lambda});
  }
  out.remove_node(removed);
  return derive_primitive_stars(out, mu);
}

// Isolated node at the mean of the existing node coordinates. The builder
// re-seats it on the data before scoring (see builder.hpp).
inline ElasticGraph apply_add_disconnected_node(const ElasticGraph& g, double mu) {
  if (g.node_count() == 0) throw data_error("add_disconnected_node: empty graph");
  ElasticGraph out = g;
  std::vector<double> z(std::size_t(g.dim), 0.0);
  for (int i = 0; i < g.node_count(); ++i) {
    auto p = g.node(i);
    for (int j = 0; j < g.dim; ++j) z[std::size_t(j)] += p[std::size_t(j)];
  }
  for (auto& x : z) x /= double(g.node_count());
  out.add_node(z);
  return derive_primitive_stars(out, mu);
}

// Named rule sets. "tree" is the full principal-tree grammar, "curve"
// grows only at terminals (principal curves), "shrink" trims, "points"
// gives incremental k-means.
inline std::vector<RuleKind> grammar_preset(const std::string& name) {
  if (name == "tree") return {RuleKind::add_node, RuleKind::bisect_edge};
  if (name == "curve") return {RuleKind::add_terminal_node};
  if (name == "shrink") return {RuleKind::remove_leaf, RuleKind::remove_edge};
  if (name == "points") return {RuleKind::add_disconnected_node};
  throw data_error("unknown grammar preset: " + name);
}

// Applies every rule at every applicable site, in deterministic order
// (rule kind as listed, then site index; remove_edge enumerates both
// survivor orientations). Sites whose preconditions fail are skipped.
// Each candidate is marked permissible per the structural policy.
inline std::vector<CandidateTransformation> enumerate_candidates(
    const ElasticGraph& g, const std::vector<RuleKind>& grammar, const StructuralPolicy& policy,
    double lambda, double mu) {
  std::vector<CandidateTransformation> out;
  auto deg = g.degrees();
  auto push = [&](GrammarOperation op, ElasticGraph result) {
    bool ok = policy.permits(result);
    out.push_back({op, std::move(result), ok});
  };
  for (RuleKind kind : grammar) {
    switch (kind) {
      case RuleKind::add_node:
        if (g.node_count() >= 2)
          for (int v = 0; v < g.node_count(); ++v)
            push({kind, v, -1}, apply_add_node(g, v, lambda, mu));
        break;
      case RuleKind::add_terminal_node:
        if (g.node_count() >= 2)
          for (int v = 0; v < g.node_count(); ++v)
            if (deg[std::size_t(v)] <= 1) push({kind, v, -1}, apply_add_node(g, v, lambda, mu));
        break;
      case RuleKind::bisect_edge:
        for (const auto& e : g.edges)
          push({kind, e.a, e.b}, apply_bisect_edge(g, e.a, e.b, mu));
        break;
      case RuleKind::remove_leaf:
        for (int v = 0; v < g.node_count(); ++v)
          if (deg[std::size_t(v)] == 1) push({kind, v, -1}, apply_remove_leaf(g, v, mu));
        break;
      case RuleKind::remove_edge:
        for (const auto& e : g.edges) {
          if (deg[std::size_t(e.a)] < 2 || deg[std::size_t(e.b)] < 2) continue;
          push({kind, e.a, e.b}, apply_remove_edge(g, e.a, e.b, mu));
          push({kind, e.b, e.a}, apply_remove_edge(g, e.b, e.a, mu));
        }
        break;
      case RuleKind::add_disconnected_node:
        if (g.node_count() >= 1)
          push({kind, -1, -1}, apply_add_disconnected_node(g, mu));
        break;
    }
  }
  return out;
}

}  // namespace epg
