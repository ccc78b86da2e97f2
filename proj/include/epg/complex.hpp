// complex.hpp — elastic cubic complexes (Cartesian products of factors).
//
// The product's vertex set is the tuple product of the factor vertex
// sets; edges and stars are the unions over all copies of every factor,
// each copy inheriting the factor's moduli. The energy of the product is
// the sum of the energies of all factor copies, which product_energy_check
// verifies against the standard energy evaluation.
#pragma once

#include <functional>
#include <vector>

#include "epg/energy.hpp"
#include "epg/graph.hpp"

namespace epg {

struct CubicComplex {
  std::vector<ElasticGraph> factors;
  ElasticGraph product;
  std::vector<int> radix;  // |V_i| per factor; first factor varies fastest

  int flat_index(const std::vector<int>& tuple) const {
    int f = 0;
    for (std::size_t i = radix.size(); i-- > 0;) f = f * radix[i] + tuple[i];
    return f;
  }
  std::vector<int> tuple_of(int flat) const {
    std::vector<int> t(radix.size());
    for (std::size_t i = 0; i < radix.size(); ++i) {
      t[i] = flat % radix[i];
      flat /= radix[i];
    }
    return t;
  }
};

// Default embedding initializer: the sum of the factor embeddings with
// every factor re-centered, so orthogonal segments produce a regular grid.
// The product's mean lands on the average of the factor means.
using ProductEmbedding =
    std::function<std::vector<double>(const std::vector<ElasticGraph>&, const std::vector<int>&)>;

inline ProductEmbedding sum_embedding() {
  return [](const std::vector<ElasticGraph>& factors, const std::vector<int>& tuple) {
    const int m = factors.front().dim;
    const double r = double(factors.size());
    std::vector<double> out(std::size_t(m), 0.0);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      std::vector<double> center(std::size_t(m), 0.0);
      for (int v = 0; v < factors[i].node_count(); ++v) {
        auto p = factors[i].node(v);
        for (int j = 0; j < m; ++j) center[std::size_t(j)] += p[std::size_t(j)];
      }
      for (auto& c : center) c /= double(factors[i].node_count());
      auto p = factors[i].node(tuple[i]);
      for (int j = 0; j < m; ++j)
        out[std::size_t(j)] += (p[std::size_t(j)] - center[std::size_t(j)]) + center[std::size_t(j)] / r;
    }
    return out;
  };
}

inline CubicComplex cartesian_product(const std::vector<ElasticGraph>& factors,
                                      const ProductEmbedding& embed = sum_embedding()) {
  if (factors.empty()) throw data_error("cartesian product needs at least one factor");
  const int m = factors.front().dim;
  for (const auto& f : factors) {
    validate(f);
    if (f.dim != m) throw data_error("factors must share the ambient dimension");
    if (f.node_count() == 0) throw data_error("empty factor");
  }

  CubicComplex cc;
  cc.factors = factors;
  long total = 1;
  for (const auto& f : factors) {
    cc.radix.push_back(f.node_count());
    total *= f.node_count();
  }

  cc.product.dim = m;
  cc.product.primitive = false;  // union-of-copies star set, not the full-neighbor one
  for (long flat = 0; flat < total; ++flat)
    cc.product.add_node(embed(factors, cc.tuple_of(int(flat))));

  // One copy of factor i per assignment of the other coordinates; walk the
  // canonical representatives (tuple[i] == 0) to enumerate copies once.
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (long flat = 0; flat < total; ++flat) {
      auto tuple = cc.tuple_of(int(flat));
      if (tuple[i] != 0) continue;
      for (const auto& e : factors[i].edges) {
        tuple[i] = e.a;
        const int a = cc.flat_index(tuple);
        tuple[i] = e.b;
        const int b = cc.flat_index(tuple);
        tuple[i] = 0;
        cc.product.edges.push_back({a, b, e.lambda});
      }
      for (const auto& s : factors[i].stars) {
        Star copy;
        copy.mu = s.mu;
        tuple[i] = s.center;
        copy.center = cc.flat_index(tuple);
        for (int l : s.leaves) {
          tuple[i] = l;
          copy.leaves.push_back(cc.flat_index(tuple));
        }
        tuple[i] = 0;
        cc.product.stars.push_back(std::move(copy));
      }
    }
  }
  validate(cc.product);
  return cc;
}

// Evaluates U(product) with the energy module and independently as the
// per-copy energy sum; the two routes must agree to 1e-12 relative.
inline double product_energy_check(const CubicComplex& cc) {
  const double direct = stretching_energy(cc.product) + bending_energy(cc.product);

  KahanSum per_copy;
  const int m = cc.product.dim;
  long total = 1;
  for (int r : cc.radix) total *= r;
  for (std::size_t i = 0; i < cc.factors.size(); ++i) {
    for (long flat = 0; flat < total; ++flat) {
      auto tuple = cc.tuple_of(int(flat));
      if (tuple[i] != 0) continue;
      for (const auto& e : cc.factors[i].edges) {
        tuple[i] = e.a;
        auto pa = cc.product.node(cc.flat_index(tuple));
        tuple[i] = e.b;
        auto pb = cc.product.node(cc.flat_index(tuple));
        tuple[i] = 0;
        per_copy.add(e.lambda * sq_dist(pa, pb));
      }
      for (const auto& s : cc.factors[i].stars) {
        std::vector<double> mean(std::size_t(m), 0.0);
        for (int l : s.leaves) {
          tuple[i] = l;
          auto p = cc.product.node(cc.flat_index(tuple));
          for (int j = 0; j < m; ++j) mean[std::size_t(j)] += p[std::size_t(j)];
        }
        tuple[i] = s.center;
        auto c = cc.product.node(cc.flat_index(tuple));
        tuple[i] = 0;
        double dev = 0.0;
        const double inv_k = 1.0 / double(s.leaves.size());
        for (int j = 0; j < m; ++j) dev += sq(c[std::size_t(j)] - mean[std::size_t(j)] * inv_k);
        per_copy.add(s.mu * dev);
      }
    }
  }
  const double copy_sum = per_copy.value();
  const double scale = std::max({std::abs(direct), std::abs(copy_sum), 1e-300});
  if (std::abs(direct - copy_sum) > 1e-12 * scale)
    throw numeric_error("product energy mismatch: direct " + format_g17(direct) + " vs copy sum " +
                        format_g17(copy_sum));
  return direct;
}

}  // namespace epg
