// graph.hpp — elastic graph data model.
//
// An elastic graph is a simple undirected graph with a stretching modulus
// on every edge, a bending modulus on every selected k-star, and an
// embedding of its vertices into R^m. Vertices are dense integer indices;
// structure edits renumber compactly.
#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epg/common.hpp"

namespace epg {

struct Edge {
  int a = 0;
  int b = 0;
  double lambda = 0.0;  // stretching modulus, >= 0

  bool operator==(const Edge&) const = default;
};

// A k-star: one center connected to k leaves, with a bending modulus.
struct Star {
  int center = 0;
  std::vector<int> leaves;
  double mu = 0.0;  // bending modulus, >= 0

  int order() const { return int(leaves.size()); }
  bool operator==(const Star&) const = default;
};

struct ElasticGraph {
  int dim = 0;                 // ambient dimension m
  std::vector<double> coords;  // node_count x dim, row-major
  std::vector<Edge> edges;
  std::vector<Star> stars;
  bool primitive = false;  // stars are exactly the full-neighbor stars

  int node_count() const { return dim == 0 ? 0 : int(coords.size()) / dim; }

  std::span<const double> node(int i) const { return {coords.data() + std::size_t(i) * dim, std::size_t(dim)}; }
  std::span<double> node(int i) { return {coords.data() + std::size_t(i) * dim, std::size_t(dim)}; }

  void add_node(std::span<const double> xyz) { coords.insert(coords.end(), xyz.begin(), xyz.end()); }

  std::vector<int> degrees() const {
    std::vector<int> deg(node_count(), 0);
    for (const auto& e : edges) {
      ++deg[e.a];
      ++deg[e.b];
    }
    return deg;
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(node_count());
    for (const auto& e : edges) {
      adj[e.a].push_back(e.b);
      adj[e.b].push_back(e.a);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
  }

  // Removes vertex v, its incident edges and stars, and renumbers the
  // remaining vertices compactly (indices above v shift down by one).
  void remove_node(int v) {
    coords.erase(coords.begin() + std::size_t(v) * dim, coords.begin() + std::size_t(v + 1) * dim);
    auto shift = [v](int i) { return i > v ? i - 1 : i; };
    std::vector<Edge> kept_edges;
    kept_edges.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.a == v || e.b == v) continue;
      kept_edges.push_back({shift(e.a), shift(e.b), e.lambda});
    }
    edges = std::move(kept_edges);
    std::vector<Star> kept_stars;
    kept_stars.reserve(stars.size());
    for (const auto& s : stars) {
      if (s.center == v || std::find(s.leaves.begin(), s.leaves.end(), v) != s.leaves.end()) continue;
      Star t = s;
      t.center = shift(t.center);
      for (auto& l : t.leaves) l = shift(l);
      kept_stars.push_back(std::move(t));
    }
    stars = std::move(kept_stars);
  }

  bool operator==(const ElasticGraph&) const = default;
};

// Checks every elastic-graph invariant and throws validation_error naming
// the first violation.
inline void validate(const ElasticGraph& g) {
  const int n = g.node_count();
  if (g.dim < 0) throw validation_error("negative dimension");
  if (g.dim > 0 && int(g.coords.size()) % g.dim != 0)
    throw validation_error("coordinate block size is not a multiple of the dimension");
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
      throw validation_error("edge " + std::to_string(i) + " references a nonexistent vertex");
    if (e.a == e.b) throw validation_error("edge " + std::to_string(i) + " is a self-loop");
    auto key = std::minmax(e.a, e.b);
    if (!seen.insert(key).second)
      throw validation_error("duplicate edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
    if (e.lambda < 0.0) throw validation_error("edge " + std::to_string(i) + " has negative modulus");
  }
  auto adj = g.adjacency();
  for (std::size_t j = 0; j < g.stars.size(); ++j) {
    const auto& s = g.stars[j];
    if (s.center < 0 || s.center >= n)
      throw validation_error("star " + std::to_string(j) + " has a nonexistent center");
    if (s.leaves.empty()) throw validation_error("star " + std::to_string(j) + " has no leaves");
    if (s.mu < 0.0) throw validation_error("star " + std::to_string(j) + " has negative modulus");
    std::set<int> leafset;
    for (int l : s.leaves) {
      if (l < 0 || l >= n) throw validation_error("star " + std::to_string(j) + " has a nonexistent leaf");
      if (l == s.center) throw validation_error("star " + std::to_string(j) + " includes its own center as a leaf");
      if (!leafset.insert(l).second) throw validation_error("star " + std::to_string(j) + " has duplicate leaves");
      if (!std::binary_search(adj[s.center].begin(), adj[s.center].end(), l))
        throw validation_error("star " + std::to_string(j) + " leaf " + std::to_string(l) +
                               " is not adjacent to the center");
    }
  }
  if (g.primitive) {
    auto deg = g.degrees();
    std::vector<int> star_at(n, -1);
    for (std::size_t j = 0; j < g.stars.size(); ++j) {
      const auto& s = g.stars[j];
      if (star_at[s.center] != -1)
        throw validation_error("primitive graph has two stars centered at vertex " + std::to_string(s.center));
      star_at[s.center] = int(j);
      std::vector<int> leaves = s.leaves;
      std::sort(leaves.begin(), leaves.end());
      if (leaves != adj[s.center])
        throw validation_error("primitive star at vertex " + std::to_string(s.center) +
                               " does not cover all neighbours");
    }
    for (int v = 0; v < n; ++v)
      if (deg[v] >= 2 && star_at[v] == -1)
        throw validation_error("primitive graph lacks a star at vertex " + std::to_string(v));
  }
}

// Replaces the star list with the full-neighbor star of every vertex of
// degree >= 2, all with modulus mu. Terminal and isolated vertices carry
// no star. Idempotent.
inline ElasticGraph derive_primitive_stars(const ElasticGraph& g, double mu) {
  ElasticGraph out = g;
  out.stars.clear();
  auto adj = g.adjacency();
  for (int v = 0; v < g.node_count(); ++v) {
    if (adj[v].size() >= 2) out.stars.push_back({v, adj[v], mu});
  }
  out.primitive = true;
  return out;
}

// Structural-complexity barcode: counts of k-stars (k >= 3) plus the node
// count, rendered as "N_kmax|...|N_4|N_3||N_nodes". A star-free graph
// renders "0||N"; zero counts between 3 and kmax are kept so the format
// stays unambiguous.
struct Barcode {
  std::vector<long> star_counts;  // star_counts[i] = number of (i+3)-stars
  long node_count = 0;

  std::string str() const {
    std::string out;
    if (star_counts.empty()) {
      out = "0";
    } else {
      for (std::size_t i = star_counts.size(); i-- > 0;) {
        out += std::to_string(star_counts[i]);
        if (i > 0) out += '|';
      }
    }
    out += "||";
    out += std::to_string(node_count);
    return out;
  }

  static Barcode parse(const std::string& text) {
    auto sep = text.find("||");
    if (sep == std::string::npos) throw data_error("barcode missing '||': " + text);
    Barcode bc;
    bc.node_count = std::stol(text.substr(sep + 2));
    std::string head = text.substr(0, sep);
    std::vector<long> counts;  // kmax first
    std::size_t pos = 0;
    while (pos <= head.size()) {
      auto bar = head.find('|', pos);
      std::string tok = head.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos);
      counts.push_back(std::stol(tok));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    if (counts.size() == 1 && counts[0] == 0) return bc;  // "0||N"
    bc.star_counts.assign(counts.rbegin(), counts.rend());
    return bc;
  }

  bool operator==(const Barcode&) const = default;
};

// Counts k-stars (k >= 3) by order. Edges and ribs are excluded: for trees
// the edge count is node_count - 1 and rib counts carry no topology.
inline Barcode barcode(const ElasticGraph& g) {
  Barcode bc;
  bc.node_count = g.node_count();
  int kmax = 0;
  for (const auto& s : g.stars) kmax = std::max(kmax, s.order());
  if (kmax >= 3) {
    bc.star_counts.assign(std::size_t(kmax - 2), 0);
    for (const auto& s : g.stars)
      if (s.order() >= 3) ++bc.star_counts[std::size_t(s.order() - 3)];
  }
  return bc;
}

// True for acyclic connected graphs (the principal-tree structure class).
inline bool is_tree(const ElasticGraph& g) {
  const int n = g.node_count();
  if (n == 0) return false;
  if (int(g.edges.size()) != n - 1) return false;
  auto adj = g.adjacency();
  std::vector<int> stack{0}, seen(n, 0);
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adj[v])
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  return count == n;
}

}  // namespace epg
