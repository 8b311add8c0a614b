#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ftlsin/graph.hpp"
#include "ftlsin/supergraph.hpp"
#include "ftlsin/walker.hpp"

namespace ftlsin {

double compute_beta(std::size_t target_size, std::size_t source_size);

inline double combined_weight(double beta, double learned, double virtual_w) {
  return beta * learned + (1.0 - beta) * virtual_w;
}

struct TransferParams {
  double virtual_weight = 1.0;
  int distance_cap = kDefaultDistanceCap;
  std::optional<double> beta_override;  // testing only
  bool per_super_beta = false;  // use |super-node| instead of |V^s| in beta
};

struct PairWeightResult {
  double weight = 0.0;    // geometric mean of 1/d over eligible pairs
  double log_sum = 0.0;   // raw sum of log(1/d), for inspection
  std::size_t pair_count = 0;
};

// Learned cross-super-node weights from source walks: a pair of member
// nodes is eligible when both appear in the same source walk; each such
// pair contributes 1/d with d the capped shortest-path distance on the
// source graph. Unreachable pairs are skipped. Thread-safe; BFS results
// and pair weights are cached.
class PairWeights {
 public:
  PairWeights(const Graph& source, const SuperGraph& sg, const WalkSet& walks,
              int distance_cap = kDefaultDistanceCap);

  PairWeightResult pair_weight(int a, int b);

 private:
  const Graph& source_;
  const SuperGraph& sg_;
  int cap_;
  // super id -> (walk index, member node) sorted by walk index
  std::vector<std::vector<std::pair<std::size_t, NodeId>>> presence_;
  std::unordered_map<NodeId, std::unordered_map<NodeId, int>> bfs_cache_;
  std::unordered_map<std::uint64_t, PairWeightResult> result_cache_;
  std::mutex mutex_;

  PairWeightResult compute(int a, int b);
  int distance_locked(NodeId v, NodeId x);
};

// Convenience form of the single-pair computation.
PairWeightResult pair_weight(const SuperGraph& sg, const Graph& source,
                             const WalkSet& source_walks, int a, int b,
                             int distance_cap = kDefaultDistanceCap);

// Weighted copy of the target graph: each edge (v, x) gets the mean of
// combined_weight over all cross-super-node pairs (A in map(v), B in map(x));
// edges with no cross pair keep weight 1. Topology is unchanged. When
// params.per_super_beta is set, sg must be non-null and beta is recomputed
// per pair from the mapped super-node's member count.
Graph reweight_target(const Graph& target, const NodeMapping& mapping,
                      PairWeights& weights, double beta,
                      const TransferParams& params,
                      const SuperGraph* sg = nullptr, int threads = 1);

struct TwoLayerConfig {
  WalkParams source_walk;
  WalkParams target_walk;
  CoarsenMethod coarsen_method = CoarsenMethod::LabelPropagation;
  std::size_t max_super_size = 0;  // 0: auto = ceil(|V^s| / |V^t|)
  MapMode map_mode = MapMode::Nearest;
  SuperDegreeSemantics degree_semantics = SuperDegreeSemantics::DistinctNeighbors;
  TransferParams transfer;
  int threads = 1;
};

struct TwoLayerResult {
  WalkSet source_walks;
  SuperGraph super_graph;
  NodeMapping mapping;
  Graph reweighted_target;
  WalkSet target_walks;
  double beta = 0.0;
};

// Full top-layer procedure: source bottom-layer walks, coarsening, node
// mapping, walk mapping, then bottom-layer walks on the reweighted target.
TwoLayerResult two_layer_walks(const Graph& source, const Graph& target,
                               const TwoLayerConfig& cfg);

}  // namespace ftlsin
