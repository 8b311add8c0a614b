#include "ftlsin/walker.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

namespace ftlsin {

std::vector<double> transition_distribution(const Graph& g,
                                            std::optional<NodeId> prev,
                                            NodeId cur,
                                            const WalkParams& params) {
  params.validate();
  auto nbrs = g.neighbors(cur);
  std::vector<double> probs(nbrs.size());
  if (nbrs.empty()) return probs;
  if (prev && !g.has_edge(cur, *prev))
    throw Error("prev node is not adjacent to cur");

  double z = 0.0;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    double alpha = 1.0;
    if (prev) {
      if (nbrs[i].to == *prev)
        alpha = 1.0 / params.p;  // hop distance 0 from prev
      else if (g.has_edge(*prev, nbrs[i].to))
        alpha = 1.0;  // hop distance 1
      else
        alpha = 1.0 / params.q;  // hop distance 2
    }
    probs[i] = alpha * nbrs[i].weight;
    z += probs[i];
  }
  if (z <= 0) {
    probs.assign(nbrs.size(), 0.0);
    return probs;
  }
  for (double& p : probs) p /= z;
  return probs;
}

std::size_t sample_next(std::span<const double> distribution,
                        std::mt19937_64& rng) {
  if (distribution.empty()) throw Error("empty transition distribution");
  double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < distribution.size(); ++i) {
    acc += distribution[i];
    if (u < acc) return i;
  }
  // Rounding leftover lands on the last positive entry.
  for (std::size_t i = distribution.size(); i-- > 0;)
    if (distribution[i] > 0) return i;
  throw Error("degenerate transition distribution");
}

const std::vector<double>& TransitionCache::get(const Graph& g,
                                                std::optional<NodeId> prev,
                                                NodeId cur,
                                                const WalkParams& params) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(prev ? *prev + 1 : 0) << 32) |
      static_cast<std::uint32_t>(cur);
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  if (table_.size() >= max_entries_) table_.clear();
  auto [ins, _] =
      table_.emplace(key, transition_distribution(g, prev, cur, params));
  return ins->second;
}

std::vector<NodeId> generate_walk(const Graph& g, NodeId start,
                                  const WalkParams& params,
                                  std::mt19937_64& rng,
                                  TransitionCache* cache) {
  params.validate();
  g.check_id(start);
  std::vector<NodeId> walk;
  walk.reserve(static_cast<std::size_t>(params.length));
  walk.push_back(start);
  std::optional<NodeId> prev;
  while (walk.size() < static_cast<std::size_t>(params.length)) {
    NodeId cur = walk.back();
    const std::vector<double>* probs;
    std::vector<double> local;
    if (cache) {
      probs = &cache->get(g, prev, cur, params);
    } else {
      local = transition_distribution(g, prev, cur, params);
      probs = &local;
    }
    if (probs->empty()) break;  // sink: truncate, no restart
    std::size_t idx = sample_next(*probs, rng);
    NodeId next = g.neighbors(cur)[idx].to;
    prev = cur;
    walk.push_back(next);
  }
  return walk;
}

WalkSet generate_walk_set(const Graph& g, const WalkParams& params,
                          int threads) {
  params.validate();
  WalkSet out;
  const std::size_t n = g.node_count();
  const std::size_t k = static_cast<std::size_t>(params.walks_per_node);
  out.walks.resize(n * k);
  if (n == 0) return out;

  std::vector<std::size_t> truncated_per_thread;
  auto work = [&](std::size_t thread_idx, std::size_t stride) {
    TransitionCache cache;
    std::size_t truncated = 0;
    for (std::size_t v = thread_idx; v < n; v += stride) {
      for (std::size_t i = 0; i < k; ++i) {
        auto rng = make_rng(derive_seed(params.seed, v, i));
        auto walk =
            generate_walk(g, static_cast<NodeId>(v), params, rng, &cache);
        if (walk.size() < static_cast<std::size_t>(params.length)) ++truncated;
        out.walks[v * k + i] = std::move(walk);
      }
    }
    truncated_per_thread[thread_idx] = truncated;
  };

  const std::size_t nthreads =
      std::max<std::size_t>(1, static_cast<std::size_t>(threads));
  truncated_per_thread.assign(nthreads, 0);
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back(work, t, nthreads);
    for (auto& th : pool) th.join();
  }
  for (std::size_t t : truncated_per_thread) out.truncated += t;
  return out;
}

std::unordered_map<NodeId, std::uint64_t> walk_frequency_histogram(
    const WalkSet& walks) {
  std::unordered_map<NodeId, std::uint64_t> freq;
  for (const auto& walk : walks.walks)
    for (NodeId v : walk) ++freq[v];
  return freq;
}

void save_walks(const WalkSet& walks, const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write walk file: " + path);
  for (const auto& walk : walks.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << g.external_id(walk[i]);
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

WalkSet load_walks(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open walk file: " + path);
  WalkSet ws;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<NodeId> walk;
    std::string tok;
    while (ls >> tok) {
      NodeId v = g.find(tok);
      if (v < 0) throw Error("walk references unknown node \"" + tok + "\"");
      walk.push_back(v);
    }
    if (!walk.empty()) ws.walks.push_back(std::move(walk));
  }
  return ws;
}

}  // namespace ftlsin
