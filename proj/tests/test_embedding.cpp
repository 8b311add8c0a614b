#include <doctest.h>

#include <cmath>

#include "ftlsin/embedding.hpp"
#include "ftlsin/generators.hpp"
#include "ftlsin/rng.hpp"
#include "test_util.hpp"

using namespace ftlsin;

namespace {

EmbeddingMatrix random_embedding(std::size_t nodes, std::size_t dim,
                                 std::uint64_t seed, bool tied = false) {
  EmbeddingMatrix emb;
  emb.nodes = nodes;
  emb.dim = dim;
  emb.tied = tied;
  emb.in.resize(nodes * dim);
  auto rng = make_rng(seed);
  for (double& x : emb.in) x = uniform01(rng) - 0.5;
  if (!tied) {
    emb.ctx.resize(nodes * dim);
    for (double& x : emb.ctx) x = uniform01(rng) - 0.5;
  }
  return emb;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double num = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return num / (std::sqrt(na) * std::sqrt(nb) + 1e-300);
}

}  // namespace

TEST_CASE("context_pairs enumerates the sliding window") {
  std::vector<NodeId> walk{0, 1, 2};
  auto pairs = context_pairs(walk, 1);
  std::vector<ContextPair> expect{{0, 1}, {1, 0}, {1, 2}, {2, 1}};
  CHECK(pairs == expect);

  std::vector<NodeId> single{0};
  CHECK(context_pairs(single, 5).empty());

  std::vector<NodeId> walk80(80);
  for (int i = 0; i < 80; ++i) walk80[static_cast<std::size_t>(i)] = i;
  auto p80 = context_pairs(walk80, 10);
  std::size_t from_interior = 0;
  for (const auto& [center, _] : p80) from_interior += (center == 40);
  CHECK(from_interior == 20);  // r=10 on both sides
}

TEST_CASE("softmax_prob") {
  SUBCASE("all-zero vectors give the uniform distribution") {
    EmbeddingMatrix emb;
    emb.nodes = 7;
    emb.dim = 3;
    emb.in.assign(21, 0.0);
    emb.ctx.assign(21, 0.0);
    for (NodeId n = 0; n < 7; ++n)
      CHECK(softmax_prob(emb, n, 2) == doctest::Approx(1.0 / 7));
  }
  SUBCASE("two nodes, d=1, tied tables: e^2/(e^2+e^1)") {
    EmbeddingMatrix emb;
    emb.nodes = 2;
    emb.dim = 1;
    emb.tied = true;
    emb.in = {1.0, 2.0};
    CHECK(softmax_prob(emb, 1, 0) ==
          doctest::Approx(std::exp(2.0) / (std::exp(2.0) + std::exp(1.0))));
  }
  SUBCASE("rows sum to 1 on random instances") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      auto emb = random_embedding(11, 4, seed);
      for (NodeId u = 0; u < 11; ++u) {
        double total = 0;
        for (NodeId n = 0; n < 11; ++n) total += softmax_prob(emb, n, u);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
  SUBCASE("large scores do not overflow") {
    EmbeddingMatrix emb;
    emb.nodes = 2;
    emb.dim = 1;
    emb.tied = true;
    emb.in = {500.0, 501.0};
    double p = softmax_prob(emb, 1, 1);
    CHECK(std::isfinite(p));
    CHECK(p > 0.5);
  }
}

TEST_CASE("neighborhood_log_likelihood") {
  auto emb = random_embedding(6, 3, 9);
  SUBCASE("empty pair list gives 0") {
    CHECK(neighborhood_log_likelihood(emb, {}) == 0.0);
  }
  SUBCASE("uniform case gives m log(1/|V|)") {
    EmbeddingMatrix zero;
    zero.nodes = 6;
    zero.dim = 3;
    zero.in.assign(18, 0.0);
    zero.ctx.assign(18, 0.0);
    std::vector<ContextPair> pairs{{0, 1}, {2, 3}, {4, 5}, {1, 0}};
    CHECK(neighborhood_log_likelihood(zero, pairs) ==
          doctest::Approx(4.0 * std::log(1.0 / 6)));
  }
  SUBCASE("matches direct per-pair evaluation") {
    std::vector<ContextPair> pairs{{0, 1}, {0, 2}, {3, 1}, {5, 0}};
    double direct = 0;
    for (auto [u, n] : pairs) direct += std::log(softmax_prob(emb, n, u));
    CHECK(neighborhood_log_likelihood(emb, pairs) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("exact softmax gradient matches central finite differences") {
  // 10 nodes, d=4, step 1e-5, relative error < 1e-4; untied and tied.
  for (bool tied : {false, true}) {
    CAPTURE(tied);
    auto emb = random_embedding(10, 4, 1234, tied);
    std::vector<ContextPair> pairs{{0, 1}, {1, 2}, {2, 0}, {3, 7},
                                   {9, 4}, {5, 5}, {8, 1}};
    auto grad = exact_softmax_gradient(emb, pairs);
    const double h = 1e-5;
    auto param = [&](std::size_t i) -> double& {
      return i < emb.in.size() ? emb.in[i] : emb.ctx[i - emb.in.size()];
    };
    double max_rel = 0;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      double saved = param(i);
      param(i) = saved + h;
      double up = neighborhood_log_likelihood(emb, pairs);
      param(i) = saved - h;
      double down = neighborhood_log_likelihood(emb, pairs);
      param(i) = saved;
      double fd = (up - down) / (2 * h);
      double rel = std::abs(fd - grad[i]) /
                   std::max(1.0, std::max(std::abs(fd), std::abs(grad[i])));
      max_rel = std::max(max_rel, rel);
    }
    CHECK(max_rel < 1e-4);
  }
}

TEST_CASE("one exact-softmax epoch strictly increases the objective") {
  auto g = test_util::graph_from_edges({{"a", "b"}, {"b", "c"}, {"c", "d"}});
  WalkParams wp;
  wp.length = 10;
  wp.walks_per_node = 2;
  WalkSet walks = generate_walk_set(g, wp);
  auto pairs = all_context_pairs(walks, 2);

  TrainConfig cfg;
  cfg.dim = 4;
  cfg.window = 2;
  cfg.epochs = 1;
  cfg.mode = TrainMode::ExactSoftmax;
  cfg.lr_initial = 0.01;
  cfg.lr_final = 0.01;
  cfg.seed = 6;
  EmbeddingMatrix before = train(walks, g.node_count(), cfg);
  cfg.epochs = 2;
  EmbeddingMatrix after = train(walks, g.node_count(), cfg);
  CHECK(neighborhood_log_likelihood(after, pairs) >
        neighborhood_log_likelihood(before, pairs));
}

TEST_CASE("objective is non-decreasing across epochs at small constant lr") {
  auto g = test_util::graph_from_edges(
      {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"c", "d"}});
  WalkParams wp;
  wp.length = 8;
  wp.walks_per_node = 2;
  WalkSet walks = generate_walk_set(g, wp);
  auto pairs = all_context_pairs(walks, 2);

  TrainConfig cfg;
  cfg.dim = 3;
  cfg.window = 2;
  cfg.mode = TrainMode::ExactSoftmax;
  cfg.lr_initial = 0.005;
  cfg.lr_final = 0.005;
  cfg.seed = 12;
  double last = -1e300;
  for (int epochs = 1; epochs <= 5; ++epochs) {
    cfg.epochs = epochs;
    EmbeddingMatrix emb = train(walks, g.node_count(), cfg);
    double ll = neighborhood_log_likelihood(emb, pairs);
    CHECK(ll >= last - 1e-6);
    last = ll;
  }
}

TEST_CASE("training is deterministic single-threaded with a fixed seed") {
  Graph g = barabasi_albert(40, 2, 8);
  WalkParams wp;
  wp.length = 15;
  wp.walks_per_node = 2;
  wp.seed = 4;
  WalkSet walks = generate_walk_set(g, wp);
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.window = 3;
  cfg.epochs = 2;
  cfg.seed = 99;
  EmbeddingMatrix a = train(walks, g.node_count(), cfg);
  EmbeddingMatrix b = train(walks, g.node_count(), cfg);
  CHECK(a.in == b.in);
  CHECK(a.ctx == b.ctx);
}

TEST_CASE("two disconnected cliques separate in embedding space") {
  std::vector<std::pair<std::string, std::string>> edges;
  auto clique = [&](const std::string& prefix) {
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        edges.emplace_back(prefix + std::to_string(i),
                           prefix + std::to_string(j));
  };
  clique("a");
  clique("b");
  Graph g = test_util::graph_from_edges(edges);

  WalkParams wp;
  wp.length = 20;
  wp.walks_per_node = 8;
  wp.seed = 31;
  WalkSet walks = generate_walk_set(g, wp);
  TrainConfig cfg;
  cfg.dim = 2;
  cfg.window = 4;
  cfg.epochs = 5;
  cfg.seed = 31;
  EmbeddingMatrix emb = train(walks, g.node_count(), cfg);

  double intra = 0, inter = 0;
  std::size_t n_intra = 0, n_inter = 0;
  for (std::size_t u = 0; u < g.node_count(); ++u)
    for (std::size_t v = u + 1; v < g.node_count(); ++v) {
      bool same = g.external_id(static_cast<NodeId>(u))[0] ==
                  g.external_id(static_cast<NodeId>(v))[0];
      double c = cosine(emb.row(static_cast<NodeId>(u)),
                        emb.row(static_cast<NodeId>(v)));
      (same ? intra : inter) += c;
      ++(same ? n_intra : n_inter);
    }
  CHECK(intra / static_cast<double>(n_intra) >
        inter / static_cast<double>(n_inter));
}

TEST_CASE("train validates its inputs") {
  WalkSet empty;
  TrainConfig cfg;
  CHECK_THROWS_AS(train(empty, 5, cfg), Error);
  WalkSet ws;
  ws.walks = {{0, 1}};
  TrainConfig bad;
  bad.dim = 0;
  CHECK_THROWS_AS(train(ws, 2, bad), Error);
}

TEST_CASE("embedding export/import round-trips bitwise") {
  Graph g = barabasi_albert(12, 2, 3);
  WalkParams wp;
  wp.length = 10;
  wp.walks_per_node = 2;
  WalkSet walks = generate_walk_set(g, wp);
  TrainConfig cfg;
  cfg.dim = 5;
  cfg.epochs = 1;
  EmbeddingMatrix emb = train(walks, g.node_count(), cfg);

  test_util::TempFile f("", "emb");
  export_embeddings(emb, g, f.path());
  EmbeddingMatrix back = import_embeddings(f.path(), g);
  CHECK(back.in == emb.in);

  auto text = test_util::slurp(f.path());
  CHECK(text.substr(0, text.find('\n')) == "12 5");
}
