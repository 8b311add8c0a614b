#include "ftlsin/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

namespace ftlsin {

double compute_beta(std::size_t target_size, std::size_t source_size) {
  if (target_size == 0 || source_size == 0)
    throw Error("beta requires non-empty networks");
  return static_cast<double>(target_size) /
         static_cast<double>(source_size + target_size);
}

PairWeights::PairWeights(const Graph& source, const SuperGraph& sg,
                         const WalkSet& walks, int distance_cap)
    : source_(source), sg_(sg), cap_(distance_cap) {
  presence_.resize(sg.super_count());
  for (std::size_t w = 0; w < walks.walks.size(); ++w) {
    // Distinct nodes per walk; co-occurrence ignores position and multiplicity.
    std::vector<NodeId> nodes = walks.walks[w];
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (NodeId v : nodes)
      presence_[static_cast<std::size_t>(sg.membership[static_cast<std::size_t>(v)])]
          .emplace_back(w, v);
  }
}

int PairWeights::distance_locked(NodeId v, NodeId x) {
  auto it = bfs_cache_.find(v);
  if (it == bfs_cache_.end()) {
    std::unordered_map<NodeId, int> dists;
    for (const auto& [node, d] : source_.bfs_frontier(v, cap_))
      dists.emplace(node, d);
    it = bfs_cache_.emplace(v, std::move(dists)).first;
  }
  auto jt = it->second.find(x);
  return jt == it->second.end() ? kUnreachable : jt->second;
}

PairWeightResult PairWeights::compute(int a, int b) {
  sg_.check_id(a);
  sg_.check_id(b);
  if (a == b) throw Error("pair_weight requires distinct super-nodes");
  const auto& pa = presence_[static_cast<std::size_t>(a)];
  const auto& pb = presence_[static_cast<std::size_t>(b)];

  // Ordered pairs (v in A, x in B) co-occurring in at least one walk.
  std::set<std::pair<NodeId, NodeId>> pairs;
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pa[i].first < pb[j].first) {
      ++i;
    } else if (pb[j].first < pa[i].first) {
      ++j;
    } else {
      std::size_t w = pa[i].first;
      std::size_t i_end = i, j_end = j;
      while (i_end < pa.size() && pa[i_end].first == w) ++i_end;
      while (j_end < pb.size() && pb[j_end].first == w) ++j_end;
      for (std::size_t ii = i; ii < i_end; ++ii)
        for (std::size_t jj = j; jj < j_end; ++jj)
          pairs.emplace(pa[ii].second, pb[jj].second);
      i = i_end;
      j = j_end;
    }
  }

  PairWeightResult res;
  double log_total = 0.0;
  for (const auto& [v, x] : pairs) {
    int d = distance_locked(v, x);
    if (d == kUnreachable || d == 0) continue;  // log P undefined there
    log_total += -std::log(static_cast<double>(d));
    ++res.pair_count;
  }
  res.log_sum = log_total;
  res.weight = res.pair_count == 0
                   ? 0.0
                   : std::exp(log_total / static_cast<double>(res.pair_count));
  return res;
}

PairWeightResult PairWeights::pair_weight(int a, int b) {
  const std::uint64_t key = (static_cast<std::uint64_t>(
                                 static_cast<std::uint32_t>(a))
                             << 32) |
                            static_cast<std::uint32_t>(b);
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = result_cache_.find(key);
  if (it != result_cache_.end()) return it->second;
  PairWeightResult res = compute(a, b);
  result_cache_.emplace(key, res);
  return res;
}

PairWeightResult pair_weight(const SuperGraph& sg, const Graph& source,
                             const WalkSet& source_walks, int a, int b,
                             int distance_cap) {
  PairWeights pw(source, sg, source_walks, distance_cap);
  return pw.pair_weight(a, b);
}

Graph reweight_target(const Graph& target, const NodeMapping& mapping,
                      PairWeights& weights, double beta,
                      const TransferParams& params, const SuperGraph* sg,
                      int threads) {
  if (mapping.map.size() != target.node_count())
    throw Error("node mapping does not cover the target graph");
  if (params.per_super_beta && sg == nullptr)
    throw Error("per_super_beta requires the super-graph");

  struct EdgeRef {
    NodeId src, dst;
  };
  std::vector<EdgeRef> edges;
  for (std::size_t v = 0; v < target.node_count(); ++v)
    for (const Graph::Edge& e : target.neighbors(static_cast<NodeId>(v)))
      if (target.directed() || e.to > static_cast<NodeId>(v))
        edges.push_back({static_cast<NodeId>(v), e.to});

  std::vector<double> new_weight(edges.size(), 1.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const auto& sa = mapping.map[static_cast<std::size_t>(edges[idx].src)];
      const auto& sb = mapping.map[static_cast<std::size_t>(edges[idx].dst)];
      double sum = 0.0;
      std::size_t n = 0;
      for (int a : sa)
        for (int b : sb) {
          if (a == b) continue;
          double learned = weights.pair_weight(a, b).weight;
          double b_eff = beta;
          if (params.per_super_beta)
            b_eff = compute_beta(
                target.node_count(),
                sg->members[static_cast<std::size_t>(a)].size());
          sum += combined_weight(b_eff, learned, params.virtual_weight);
          ++n;
        }
      if (n > 0) new_weight[idx] = sum / static_cast<double>(n);
    }
  };
  const std::size_t nthreads = std::max(1, threads);
  if (nthreads <= 1 || edges.size() < 2 * nthreads) {
    work(0, edges.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (edges.size() + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back(work, t * chunk,
                        std::min(edges.size(), (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }

  GraphBuilder builder(target.directed());
  for (std::size_t v = 0; v < target.node_count(); ++v)
    builder.intern(target.external_id(static_cast<NodeId>(v)));
  for (std::size_t idx = 0; idx < edges.size(); ++idx)
    builder.add_edge(edges[idx].src, edges[idx].dst, new_weight[idx]);
  return builder.build();
}

TwoLayerResult two_layer_walks(const Graph& source, const Graph& target,
                               const TwoLayerConfig& cfg) {
  if (source.node_count() == 0 || target.node_count() == 0)
    throw Error("two_layer_walks requires non-empty graphs");

  TwoLayerResult res;
  res.source_walks = generate_walk_set(source, cfg.source_walk, cfg.threads);

  std::size_t max_super = cfg.max_super_size;
  if (max_super == 0)
    max_super = (source.node_count() + target.node_count() - 1) /
                target.node_count();
  res.super_graph =
      coarsen(source, cfg.coarsen_method, max_super, cfg.source_walk.seed);

  res.mapping =
      map_all_nodes(target, res.super_graph, cfg.map_mode, cfg.degree_semantics);

  double beta = cfg.transfer.beta_override
                    ? *cfg.transfer.beta_override
                    : compute_beta(target.node_count(), source.node_count());
  res.beta = beta;

  PairWeights weights(source, res.super_graph, res.source_walks,
                      cfg.transfer.distance_cap);
  res.reweighted_target =
      reweight_target(target, res.mapping, weights, beta, cfg.transfer,
                      &res.super_graph, cfg.threads);

  res.target_walks =
      generate_walk_set(res.reweighted_target, cfg.target_walk, cfg.threads);
  return res;
}

}  // namespace ftlsin
