#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ftlsin/graph.hpp"
#include "ftlsin/rng.hpp"

namespace ftlsin {

// Second-order biased walk parameters (return p, in-out q).
struct WalkParams {
  double p = 1.0;
  double q = 1.0;
  int length = 80;
  int walks_per_node = 10;
  std::uint64_t seed = 1;

  void validate() const {
    if (p <= 0) throw Error("p must be positive");
    if (q <= 0) throw Error("q must be positive");
    if (length < 1) throw Error("walk length must be >= 1");
    if (walks_per_node < 1) throw Error("walks per node must be >= 1");
  }
};

struct WalkSet {
  std::vector<std::vector<NodeId>> walks;
  std::string source_graph_id;
  std::size_t truncated = 0;  // walks that hit a sink before full length
};

// Probabilities aligned with graph.neighbors(cur); empty when cur has no
// neighbors. With no previous node the bias is identically 1, so the first
// step is weight-proportional.
std::vector<double> transition_distribution(const Graph& g,
                                            std::optional<NodeId> prev,
                                            NodeId cur,
                                            const WalkParams& params);

// Index into the distribution, drawn with exactly the stated probabilities.
std::size_t sample_next(std::span<const double> distribution,
                        std::mt19937_64& rng);

// Per-worker cache of transition distributions keyed by (prev, cur).
// Bounded; cleared wholesale when full. Purely a speed knob.
class TransitionCache {
 public:
  explicit TransitionCache(std::size_t max_entries = 1 << 18)
      : max_entries_(max_entries) {}
  const std::vector<double>& get(const Graph& g, std::optional<NodeId> prev,
                                 NodeId cur, const WalkParams& params);

 private:
  std::size_t max_entries_;
  std::unordered_map<std::uint64_t, std::vector<double>> table_;
};

std::vector<NodeId> generate_walk(const Graph& g, NodeId start,
                                  const WalkParams& params,
                                  std::mt19937_64& rng,
                                  TransitionCache* cache = nullptr);

// k walks per start node; walk (v, i) uses the stream derive_seed(seed, v, i),
// so the output is identical for any thread count.
WalkSet generate_walk_set(const Graph& g, const WalkParams& params,
                          int threads = 1);

std::unordered_map<NodeId, std::uint64_t> walk_frequency_histogram(
    const WalkSet& walks);

// Walk file: one walk per line, node external ids whitespace-separated.
void save_walks(const WalkSet& walks, const Graph& g, const std::string& path);
WalkSet load_walks(const std::string& path, const Graph& g);

}  // namespace ftlsin
