#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epg/energy.hpp"
#include "epg/grammar.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace epg;

namespace {
// Deviation of the star centered at v from pluriharmonicity.
double star_deviation(const ElasticGraph& g, int v) {
  for (const auto& s : g.stars) {
    if (s.center != v) continue;
    std::vector<double> mean(std::size_t(g.dim), 0.0);
    for (int l : s.leaves)
      for (int j = 0; j < g.dim; ++j) mean[std::size_t(j)] += g.node(l)[std::size_t(j)];
    double dev = 0.0;
    for (int j = 0; j < g.dim; ++j)
      dev += sq(g.node(v)[std::size_t(j)] - mean[std::size_t(j)] / double(s.leaves.size()));
    return std::sqrt(dev);
  }
  return 0.0;
}
}  // namespace

TEST_CASE("add_node extrapolates linearly at a terminal vertex") {
  ElasticGraph g;
  g.dim = 2;
  g.add_node(std::vector<double>{0.0, 0.0});
  g.add_node(std::vector<double>{1.0, 0.0});
  g.edges = {{0, 1, 1.0}};
  auto out = apply_add_node(g, 1, 0.5, 1.0);
  REQUIRE(out.node_count() == 3);
  CHECK(out.node(2)[0] == doctest::Approx(2.0));
  CHECK(out.node(2)[1] == doctest::Approx(0.0));
  CHECK(out.edges.size() == 2);
  CHECK(out.primitive);
}

TEST_CASE("add_node at a rib center lands on the center (degenerate, allowed)") {
  ElasticGraph g;
  g.dim = 2;
  g.add_node(std::vector<double>{0.0, 0.0});
  g.add_node(std::vector<double>{1.0, 0.0});
  g.add_node(std::vector<double>{-1.0, 0.0});
  g.edges = {{0, 1, 1.0}, {0, 2, 1.0}};
  auto out = apply_add_node(g, 0, 1.0, 1.0);
  CHECK(out.node(3)[0] == doctest::Approx(0.0));
  CHECK(out.node(3)[1] == doctest::Approx(0.0));
}

TEST_CASE("add_node solves the pluriharmonicity equation at a 3-star center") {
  ElasticGraph g;
  g.dim = 2;
  g.add_node(std::vector<double>{0.0, 0.0});
  g.add_node(std::vector<double>{1.0, 0.0});
  g.add_node(std::vector<double>{0.0, 1.0});
  g.add_node(std::vector<double>{-1.0, 0.0});
  g.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}};
  auto out = apply_add_node(g, 0, 1.0, 1.0);
  CHECK(out.node(4)[0] == doctest::Approx(0.0));
  CHECK(out.node(4)[1] == doctest::Approx(-1.0));
}

TEST_CASE("add_node refuses a single-vertex graph") {
  ElasticGraph g;
  g.dim = 2;
  g.add_node(std::vector<double>{0.0, 0.0});
  CHECK_THROWS_AS(apply_add_node(g, 0, 1.0, 1.0), data_error);
}

TEST_CASE("bisect_edge places the midpoint and preserves structure") {
  ElasticGraph g;
  g.dim = 2;
  g.add_node(std::vector<double>{0.0, 0.0});
  g.add_node(std::vector<double>{2.0, 4.0});
  g.edges = {{0, 1, 0.7}};
  auto out = apply_bisect_edge(g, 0, 1, 1.0);
  REQUIRE(out.node_count() == 3);
  CHECK(out.node(2)[0] == doctest::Approx(1.0));
  CHECK(out.node(2)[1] == doctest::Approx(2.0));
  CHECK(barcode(out).str() == "0||3");
  for (const auto& e : out.edges) CHECK(e.lambda == doctest::Approx(0.7));  // inherited

  auto star = fixtures::star_graph(3);
  auto bis = apply_bisect_edge(star, 0, 1, 1.0);
  CHECK(barcode(bis).str() == "1||5");  // the 3-star at the old center survives

  CHECK_THROWS_AS(apply_bisect_edge(g, 0, 5, 1.0), data_error);
}

TEST_CASE("remove_leaf basics") {
  auto path3 = fixtures::path_graph(3);
  auto seg = apply_remove_leaf(path3, 2, 1.0);
  CHECK(seg.node_count() == 2);
  CHECK(seg.edges.size() == 1);

  auto star = fixtures::star_graph(3);
  auto path = apply_remove_leaf(star, 3, 1.0);
  CHECK(path.node_count() == 3);
  CHECK(barcode(path).str() == "0||3");

  auto two = fixtures::path_graph(2);
  auto one = apply_remove_leaf(two, 1, 1.0);
  CHECK(one.node_count() == 1);
  CHECK(one.edges.empty());

  CHECK_THROWS_AS(apply_remove_leaf(path3, 1, 1.0), data_error);  // interior vertex
}

TEST_CASE("remove_edge contracts a path interior edge") {
  auto path4 = fixtures::path_graph(4);
  auto out = apply_remove_edge(path4, 1, 2, 1.0);
  CHECK(out.node_count() == 3);
  CHECK(is_tree(out));
  CHECK(barcode(out).str() == "0||3");
}

TEST_CASE("remove_edge fuses two 3-stars across a bridge into a 4-star") {
  // centers 0 and 1 bridged; each with two private leaves
  ElasticGraph g;
  g.dim = 2;
  g.add_node(std::vector<double>{-0.5, 0.0});
  g.add_node(std::vector<double>{0.5, 0.0});
  g.add_node(std::vector<double>{-1.0, 0.8});
  g.add_node(std::vector<double>{-1.0, -0.8});
  g.add_node(std::vector<double>{1.0, 0.8});
  g.add_node(std::vector<double>{1.0, -0.8});
  g.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {1, 4, 1.0}, {1, 5, 1.0}};
  g = derive_primitive_stars(g, 1.0);
  CHECK(barcode(g).str() == "2||6");
  auto fused = apply_remove_edge(g, 0, 1, 1.0);
  CHECK(fused.node_count() == 5);
  CHECK(barcode(fused).str() == "1|0||5");  // one 4-star
  REQUIRE(fused.stars.size() == 1);
  CHECK(fused.stars[0].order() == 4);
}

TEST_CASE("remove_edge refuses a leaf endpoint") {
  auto path3 = fixtures::path_graph(3);
  CHECK_THROWS_AS(apply_remove_edge(path3, 1, 2, 1.0), data_error);  // 2 is a leaf
}

TEST_CASE("enumeration on a 2-node segment yields 3 tree candidates") {
  auto seg = fixtures::path_graph(2);
  StructuralPolicy policy;
  policy.sc_max = 50;
  auto cands = enumerate_candidates(seg, grammar_preset("tree"), policy, 0.01, 0.1);
  REQUIRE(cands.size() == 3);  // add at v0, add at v1, bisect
  CHECK(cands[0].operation.kind == RuleKind::add_node);
  CHECK(cands[0].operation.v0 == 0);
  CHECK(cands[1].operation.kind == RuleKind::add_node);
  CHECK(cands[1].operation.v0 == 1);
  CHECK(cands[2].operation.kind == RuleKind::bisect_edge);
  for (const auto& c : cands) {
    CHECK(c.permissible);
    CHECK_NOTHROW(validate(c.result));
    CHECK(c.result.primitive);
  }
}

TEST_CASE("branch bound forbids growing a 4-star out of a 3-star") {
  auto star = fixtures::star_graph(3);
  StructuralPolicy policy;
  policy.kind = StructuralPolicy::Kind::branch_bound;
  policy.b_max = 1;
  auto cands = enumerate_candidates(star, grammar_preset("tree"), policy, 0.01, 0.1);
  for (const auto& c : cands) {
    if (c.operation.kind == RuleKind::add_node && c.operation.v0 == 0)
      CHECK_FALSE(c.permissible);  // would create a 4-star
    else
      CHECK(c.permissible);
  }
}

TEST_CASE("curve grammar on a path has exactly the two terminal sites") {
  for (int n : {2, 5, 9}) {
    auto path = fixtures::path_graph(n);
    auto cands = enumerate_candidates(path, grammar_preset("curve"), StructuralPolicy{}, 0.01, 0.1);
    REQUIRE(cands.size() == 2);
    CHECK(cands[0].operation.v0 == 0);
    CHECK(cands[1].operation.v0 == n - 1);
  }
}

TEST_CASE("grow rules add exactly one node, shrink rules remove exactly one") {
  SplitMix64 rng(211);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + int(rng.next() % 8);
    ElasticGraph g;
    g.dim = 2;
    for (int i = 0; i < n; ++i) g.add_node(std::vector<double>{rng.uniform(), rng.uniform()});
    for (auto [a, b] : oracle::random_tree_edges(rng, n)) g.edges.push_back({a, b, 0.5});
    g = derive_primitive_stars(g, 1.0);
    for (const char* preset : {"tree", "curve", "shrink"}) {
      auto cands = enumerate_candidates(g, grammar_preset(preset), StructuralPolicy{}, 0.01, 0.1);
      for (const auto& c : cands) {
        const int delta = c.result.node_count() - n;
        if (std::string(preset) == "shrink")
          CHECK(delta == -1);
        else
          CHECK(delta == 1);
        CHECK(is_tree(c.result));  // grow and shrink both preserve tree-ness
      }
    }
  }
}

TEST_CASE("add_node then remove_leaf at the added vertex restores the structure") {
  SplitMix64 rng(223);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + int(rng.next() % 8);
    ElasticGraph g;
    g.dim = 2;
    for (int i = 0; i < n; ++i) g.add_node(std::vector<double>{rng.uniform(), rng.uniform()});
    for (auto [a, b] : oracle::random_tree_edges(rng, n)) g.edges.push_back({a, b, 0.01});
    g = derive_primitive_stars(g, 0.1);
    const int site = int(rng.next() % std::uint64_t(n));
    auto grown = apply_add_node(g, site, 0.01, 0.1);
    auto back = apply_remove_leaf(grown, grown.node_count() - 1, 0.1);
    CHECK(back == g);
  }
}

TEST_CASE("placement recipes make the completed star pluriharmonic at insertion") {
  SplitMix64 rng(227);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + int(rng.next() % 8);
    ElasticGraph g;
    g.dim = 3;
    for (int i = 0; i < n; ++i)
      g.add_node(std::vector<double>{rng.uniform(), rng.uniform(), rng.uniform()});
    for (auto [a, b] : oracle::random_tree_edges(rng, n)) g.edges.push_back({a, b, 0.01});
    g = derive_primitive_stars(g, 0.1);
    const double scale = std::max(embedding_diameter(g), 1.0);

    const int site = int(rng.next() % std::uint64_t(n));
    auto grown = apply_add_node(g, site, 0.01, 0.1);
    CHECK(star_deviation(grown, site) <= 1e-12 * scale);

    const auto& e = g.edges[std::size_t(rng.next() % g.edges.size())];
    auto bis = apply_bisect_edge(g, e.a, e.b, 0.1);
    CHECK(star_deviation(bis, bis.node_count() - 1) <= 1e-12 * scale);
  }
}

TEST_CASE("remove_edge is enumerated in both orientations") {
  auto path4 = fixtures::path_graph(4);  // one interior edge (1,2), both deg 2
  auto cands = enumerate_candidates(path4, grammar_preset("shrink"), StructuralPolicy{}, 0.01, 0.1);
  int removes = 0, leaves = 0;
  for (const auto& c : cands) {
    if (c.operation.kind == RuleKind::remove_edge) ++removes;
    if (c.operation.kind == RuleKind::remove_leaf) ++leaves;
  }
  CHECK(leaves == 2);
  CHECK(removes == 2);  // survivor 1 and survivor 2
}

TEST_CASE("enumeration is deterministic") {
  auto star = fixtures::star_graph(4);
  auto a = enumerate_candidates(star, grammar_preset("tree"), StructuralPolicy{}, 0.01, 0.1);
  auto b = enumerate_candidates(star, grammar_preset("tree"), StructuralPolicy{}, 0.01, 0.1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].operation == b[i].operation);
    CHECK(a[i].result == b[i].result);
    CHECK(a[i].permissible == b[i].permissible);
  }
}

TEST_CASE("unknown grammar preset is rejected") {
  CHECK_THROWS_AS(grammar_preset("spanningtree"), data_error);
}
