#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ftlsin/graph.hpp"
#include "ftlsin/walker.hpp"

namespace ftlsin {

// Input vectors are the exported embedding f(u); context vectors are the
// output side of the Skip-gram factorization. With tied weights the context
// table aliases the input table.
struct EmbeddingMatrix {
  std::size_t nodes = 0;
  std::size_t dim = 0;
  bool tied = false;
  std::vector<double> in;   // nodes x dim, row-major
  std::vector<double> ctx;  // empty when tied

  std::span<double> row(NodeId u) {
    return {in.data() + static_cast<std::size_t>(u) * dim, dim};
  }
  std::span<const double> row(NodeId u) const {
    return {in.data() + static_cast<std::size_t>(u) * dim, dim};
  }
  std::span<double> context_row(NodeId u) {
    auto& table = tied ? in : ctx;
    return {table.data() + static_cast<std::size_t>(u) * dim, dim};
  }
  std::span<const double> context_row(NodeId u) const {
    const auto& table = tied ? in : ctx;
    return {table.data() + static_cast<std::size_t>(u) * dim, dim};
  }
};

enum class TrainMode { ExactSoftmax, NegativeSampling };

struct TrainConfig {
  std::size_t dim = 128;
  int window = 10;
  int epochs = 5;
  double lr_initial = 0.025;
  double lr_final = 0.0001;
  TrainMode mode = TrainMode::NegativeSampling;
  int negatives = 5;
  std::uint64_t seed = 1;
  bool tied = false;
  int threads = 1;

  void validate() const {
    if (dim == 0) throw Error("embedding dimension must be positive");
    if (window < 1) throw Error("window must be >= 1");
    if (epochs < 1) throw Error("epochs must be >= 1");
    if (lr_initial <= 0 || lr_final <= 0 || lr_final > lr_initial)
      throw Error("learning rate must be positive and non-increasing");
    if (mode == TrainMode::NegativeSampling && negatives < 1)
      throw Error("negative sample count must be >= 1");
  }
};

using ContextPair = std::pair<NodeId, NodeId>;  // (center, context)

// All (walk[i], walk[j]) with 0 < |i - j| <= window, clipped at boundaries.
std::vector<ContextPair> context_pairs(std::span<const NodeId> walk,
                                       int window);
std::vector<ContextPair> all_context_pairs(const WalkSet& walks, int window);

// Exact softmax Pr(n | f(u)) over all nodes; max-shifted before
// exponentiation.
double softmax_prob(const EmbeddingMatrix& emb, NodeId n, NodeId u);

// Sum over pairs of log softmax_prob(context | center).
double neighborhood_log_likelihood(const EmbeddingMatrix& emb,
                                   std::span<const ContextPair> pairs);

// Gradient of neighborhood_log_likelihood w.r.t. all parameters, laid out
// as [in | ctx] (ctx absent when tied). Exact-softmax path only.
std::vector<double> exact_softmax_gradient(const EmbeddingMatrix& emb,
                                           std::span<const ContextPair> pairs);

EmbeddingMatrix train(const WalkSet& walks, std::size_t node_count,
                      const TrainConfig& cfg);

// Text format: header "N d", then "external_id v1 ... vd" per node with
// round-trip precision.
void export_embeddings(const EmbeddingMatrix& emb, const Graph& g,
                       const std::string& path);
EmbeddingMatrix import_embeddings(const std::string& path, const Graph& g);

}  // namespace ftlsin
