#include <doctest.h>

#include <cmath>
#include <set>

#include "ftlsin/transfer.hpp"
#include "test_util.hpp"

using namespace ftlsin;

namespace {

// Brute-force reference for pair_weight: enumerate every walk and every
// ordered member pair, skipping unreachable and zero distances, geometric
// mean at the end. Independent of PairWeights' indexing and caching.
double brute_pair_weight(const SuperGraph& sg, const Graph& source,
                         const WalkSet& walks, int a, int b, int cap) {
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& walk : walks.walks) {
    for (NodeId v : walk)
      for (NodeId x : walk) {
        if (sg.membership[static_cast<std::size_t>(v)] != a) continue;
        if (sg.membership[static_cast<std::size_t>(x)] != b) continue;
        pairs.emplace(v, x);
      }
  }
  double log_sum = 0.0;
  std::size_t n = 0;
  for (const auto& [v, x] : pairs) {
    int d = source.bfs_distance(v, x, cap);
    if (d == kUnreachable || d == 0) continue;
    log_sum += std::log(1.0 / static_cast<double>(d));
    ++n;
  }
  return n == 0 ? 0.0 : std::exp(log_sum / static_cast<double>(n));
}

}  // namespace

TEST_CASE("compute_beta") {
  CHECK(compute_beta(10310, 60744) ==
        doctest::Approx(10310.0 / 71054.0).epsilon(1e-15));
  CHECK(compute_beta(7, 7) == doctest::Approx(0.5));
  CHECK(compute_beta(1, 1000000) == doctest::Approx(1.0 / 1000001));
  CHECK_THROWS_AS(compute_beta(0, 5), Error);
  CHECK_THROWS_AS(compute_beta(5, 0), Error);
}

TEST_CASE("beta is in (0,1) and decreases with source size") {
  double last = 1.0;
  for (std::size_t source = 10; source <= 100000; source *= 10) {
    double b = compute_beta(100, source);
    CHECK(b > 0.0);
    CHECK(b < 1.0);
    CHECK(b < last);
    last = b;
  }
}

TEST_CASE("combined_weight is the stated convex combination") {
  CHECK(combined_weight(0.3, 0.0, 1.0) == doctest::Approx(0.7));
  CHECK(combined_weight(0.3, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(combined_weight(0.145101, 0.5, 1.0) ==
        doctest::Approx(0.9274495).epsilon(1e-6));
  for (double beta : {0.1, 0.5, 0.9})
    for (double learned : {0.0, 0.3, 1.0})
      for (double virt : {0.5, 1.0}) {
        double w = combined_weight(beta, learned, virt);
        CHECK(w >= std::min(learned, virt) - 1e-15);
        CHECK(w <= std::max(learned, virt) + 1e-15);
      }
}

TEST_CASE("pair_weight on hand fixtures") {
  // Path s0-s1-s2; supers A={s0}, B={s2}; one walk visiting both.
  auto g = test_util::graph_from_edges({{"s0", "s1"}, {"s1", "s2"}});
  std::vector<int> membership{0, 1, 2};
  SuperGraph sg = supergraph_from_membership(g, membership);
  WalkSet walks;
  walks.walks = {{g.find("s0"), g.find("s1"), g.find("s2")}};

  SUBCASE("single eligible pair at distance 2 gives 0.5") {
    auto res = pair_weight(sg, g, walks, 0, 2);
    CHECK(res.pair_count == 1);
    CHECK(res.weight == doctest::Approx(0.5));
    CHECK(res.log_sum == doctest::Approx(std::log(0.5)));
  }
  SUBCASE("adjacent pair at distance 1 gives 1") {
    auto res = pair_weight(sg, g, walks, 0, 1);
    CHECK(res.weight == doctest::Approx(1.0));
  }
  SUBCASE("no co-occurring pairs gives 0") {
    WalkSet separate;
    separate.walks = {{g.find("s0")}, {g.find("s2")}};
    auto res = pair_weight(sg, g, separate, 0, 2);
    CHECK(res.pair_count == 0);
    CHECK(res.weight == 0.0);
  }
  SUBCASE("same super-node is rejected") {
    CHECK_THROWS_AS(pair_weight(sg, g, walks, 1, 1), Error);
    CHECK_THROWS_AS(pair_weight(sg, g, walks, 0, 9), Error);
  }
}

TEST_CASE("pair_weight stays in [0,1] and hits 1 iff all pairs at distance 1") {
  auto g = test_util::graph_from_edges({{"a", "b"}, {"b", "c"}, {"c", "d"},
                                        {"d", "a"}, {"a", "c"}});
  std::vector<int> membership{0, 0, 1, 1};
  SuperGraph sg = supergraph_from_membership(g, membership);
  WalkParams params;
  params.length = 12;
  params.walks_per_node = 2;
  params.seed = 2;
  WalkSet walks = generate_walk_set(g, params);
  auto res = pair_weight(sg, g, walks, 0, 1);
  CHECK(res.weight >= 0.0);
  CHECK(res.weight <= 1.0);
  // a-c, a-d? a:(c:1, d:1) and b:(c:1, d:2): not all at distance 1.
  CHECK(res.weight < 1.0);

  // Clique: every pair at distance 1.
  auto k4 = test_util::graph_from_edges(
      {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "d"}});
  SuperGraph sk = supergraph_from_membership(k4, {0, 0, 1, 1});
  WalkSet kw = generate_walk_set(k4, params);
  CHECK(pair_weight(sk, k4, kw, 0, 1).weight == doctest::Approx(1.0));
}

TEST_CASE("pair_weight matches the brute-force oracle on a 6-node instance") {
  auto g = test_util::graph_from_edges({{"a", "b"}, {"b", "c"}, {"c", "d"},
                                        {"d", "e"}, {"e", "f"}, {"f", "a"},
                                        {"b", "e"}});
  std::vector<int> membership{0, 0, 1, 1, 2, 2};
  SuperGraph sg = supergraph_from_membership(g, membership);
  WalkParams params;
  params.length = 8;
  params.walks_per_node = 3;
  params.seed = 77;
  WalkSet walks = generate_walk_set(g, params);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      auto res = pair_weight(sg, g, walks, a, b);
      CHECK(res.weight ==
            doctest::Approx(brute_pair_weight(sg, g, walks, a, b,
                                              kDefaultDistanceCap))
                .epsilon(1e-12));
    }
}

TEST_CASE("reweight_target preserves topology and applies pair means") {
  auto target = test_util::graph_from_edges({{"t0", "t1"}, {"t1", "t2"}});
  auto source = test_util::graph_from_edges({{"s0", "s1"}, {"s1", "s2"}});
  SuperGraph sg = supergraph_from_membership(source, {0, 1, 2});
  WalkSet walks;
  walks.walks = {{source.find("s0"), source.find("s1"), source.find("s2")}};
  PairWeights weights(source, sg, walks);
  TransferParams params;

  SUBCASE("all mappings empty keeps unit weights") {
    NodeMapping empty;
    empty.map.assign(target.node_count(), {});
    Graph rw = reweight_target(target, empty, weights, 0.3, params);
    CHECK(rw.edge_count() == target.edge_count());
    for (std::size_t v = 0; v < rw.node_count(); ++v)
      for (const auto& e : rw.neighbors(static_cast<NodeId>(v)))
        CHECK(e.weight == 1.0);
  }
  SUBCASE("singleton mapping applies combined_weight directly") {
    NodeMapping nm;
    nm.map.assign(target.node_count(), {});
    nm.map[static_cast<std::size_t>(target.find("t0"))] = {0};
    nm.map[static_cast<std::size_t>(target.find("t1"))] = {2};
    Graph rw = reweight_target(target, nm, weights, 0.4, params);
    double learned = weights.pair_weight(0, 2).weight;  // 0.5
    CHECK(rw.edge_weight(rw.find("t0"), rw.find("t1")) ==
          doctest::Approx(combined_weight(0.4, learned, 1.0)));
    // t1-t2: t2 unmapped -> weight 1.
    CHECK(rw.edge_weight(rw.find("t1"), rw.find("t2")) == 1.0);
  }
  SUBCASE("both endpoints in the same super-node fall back to 1") {
    NodeMapping nm;
    nm.map.assign(target.node_count(), std::vector<int>{1});
    Graph rw = reweight_target(target, nm, weights, 0.4, params);
    for (std::size_t v = 0; v < rw.node_count(); ++v)
      for (const auto& e : rw.neighbors(static_cast<NodeId>(v)))
        CHECK(e.weight == 1.0);
  }
}

TEST_CASE("reweight_target matches brute force on a 6-node/4-node fixture") {
  auto source = test_util::graph_from_edges({{"a", "b"}, {"b", "c"}, {"c", "d"},
                                             {"d", "e"}, {"e", "f"}, {"f", "a"},
                                             {"b", "e"}});
  SuperGraph sg = supergraph_from_membership(source, {0, 0, 1, 1, 2, 2});
  auto target = test_util::graph_from_edges(
      {{"t0", "t1"}, {"t1", "t2"}, {"t2", "t3"}, {"t3", "t0"}});
  WalkParams params;
  params.length = 8;
  params.walks_per_node = 3;
  params.seed = 5;
  WalkSet walks = generate_walk_set(source, params);
  NodeMapping nm = map_all_nodes(target, sg, MapMode::Nearest);
  PairWeights weights(source, sg, walks);
  const double beta = 0.25;
  TransferParams tp;
  Graph rw = reweight_target(target, nm, weights, beta, tp);

  for (std::size_t v = 0; v < target.node_count(); ++v) {
    for (const auto& e : target.neighbors(static_cast<NodeId>(v))) {
      double sum = 0.0;
      std::size_t n = 0;
      for (int a : nm.map[v])
        for (int b : nm.map[static_cast<std::size_t>(e.to)]) {
          if (a == b) continue;
          sum += combined_weight(
              beta,
              brute_pair_weight(sg, source, walks, a, b, kDefaultDistanceCap),
              1.0);
          ++n;
        }
      double expect = n == 0 ? 1.0 : sum / static_cast<double>(n);
      CHECK(rw.edge_weight(static_cast<NodeId>(v), e.to) ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("uniform weight rescaling leaves transition laws unchanged") {
  auto g = test_util::graph_from_edges(
      {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"c", "d"}});
  GraphBuilder scaled_builder(false);
  for (std::size_t v = 0; v < g.node_count(); ++v)
    scaled_builder.intern(g.external_id(static_cast<NodeId>(v)));
  for (std::size_t v = 0; v < g.node_count(); ++v)
    for (const auto& e : g.neighbors(static_cast<NodeId>(v)))
      if (e.to > static_cast<NodeId>(v))
        scaled_builder.add_edge(static_cast<NodeId>(v), e.to, e.weight * 3.7);
  Graph scaled = scaled_builder.build();

  WalkParams params;
  params.p = 2;
  params.q = 0.5;
  for (NodeId cur = 0; cur < static_cast<NodeId>(g.node_count()); ++cur) {
    auto base = transition_distribution(g, std::nullopt, cur, params);
    auto resc = transition_distribution(scaled, std::nullopt, cur, params);
    REQUIRE(base.size() == resc.size());
    for (std::size_t i = 0; i < base.size(); ++i)
      CHECK(base[i] == doctest::Approx(resc[i]).epsilon(1e-12));
  }
}

TEST_CASE("two_layer_walks end to end on a small instance") {
  auto source = test_util::graph_from_edges({{"a", "b"}, {"b", "c"}, {"c", "d"},
                                             {"d", "e"}, {"e", "f"}, {"f", "a"}});
  TwoLayerConfig cfg;
  cfg.source_walk.length = 10;
  cfg.source_walk.walks_per_node = 2;
  cfg.source_walk.seed = 3;
  cfg.target_walk.length = 6;
  cfg.target_walk.walks_per_node = 2;
  cfg.target_walk.seed = 4;
  cfg.max_super_size = 1;
  cfg.map_mode = MapMode::Exact;

  TwoLayerResult res = two_layer_walks(source, source, cfg);
  CHECK(res.super_graph.super_count() == source.node_count());
  CHECK(res.target_walks.walks.size() == source.node_count() * 2);
  for (const auto& walk : res.target_walks.walks) {
    CHECK(walk.size() == 6);
    for (std::size_t i = 1; i < walk.size(); ++i)
      CHECK(res.reweighted_target.has_edge(walk[i - 1], walk[i]));
  }
  // Ring: every node maps somewhere; all reweighted weights in (0, 1].
  for (std::size_t v = 0; v < res.reweighted_target.node_count(); ++v)
    for (const auto& e :
         res.reweighted_target.neighbors(static_cast<NodeId>(v))) {
      CHECK(e.weight > 0.0);
      CHECK(e.weight <= 1.0);
    }
  CHECK(res.beta == doctest::Approx(0.5));

  SUBCASE("source and target walk lengths differ as configured") {
    for (const auto& walk : res.source_walks.walks) CHECK(walk.size() == 10);
    for (const auto& walk : res.target_walks.walks) CHECK(walk.size() == 6);
  }
}

TEST_CASE("no cross-super co-occurrence collapses to constant weights") {
  // Two disconnected source triangles: walks never span super-nodes, so all
  // learned weights are 0 and every reweighted edge gets (1-beta).
  auto source = test_util::graph_from_edges({{"a", "b"}, {"b", "c"}, {"c", "a"},
                                             {"x", "y"}, {"y", "z"}, {"z", "x"}});
  auto target = test_util::graph_from_edges({{"t0", "t1"}, {"t1", "t2"}});
  TwoLayerConfig cfg;
  cfg.source_walk.length = 6;
  cfg.source_walk.walks_per_node = 2;
  cfg.max_super_size = 3;
  cfg.transfer.beta_override = 0.25;
  TwoLayerResult res = two_layer_walks(source, target, cfg);
  for (std::size_t v = 0; v < res.reweighted_target.node_count(); ++v)
    for (const auto& e :
         res.reweighted_target.neighbors(static_cast<NodeId>(v)))
      CHECK(e.weight == doctest::Approx(0.75));
}
