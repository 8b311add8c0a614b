#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ftlsin {

using NodeId = std::int32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kUnreachable = -1;
constexpr int kDefaultDistanceCap = 10;

struct IngestReport {
  std::size_t lines_read = 0;
  std::size_t edges_kept = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
  std::size_t component_count = 0;
  std::size_t largest_component = 0;
  std::string summary() const;
};

// Immutable adjacency structure. Dense ids are contiguous in [0, node_count);
// undirected graphs store each edge in both lists with equal weight.
// Self-loops are dropped and duplicate (u,v) entries collapsed (weights
// summed) at build time.
class Graph {
 public:
  struct Edge {
    NodeId to;
    double weight;
  };

  Graph() = default;

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const;  // undirected edges counted once
  bool directed() const { return directed_; }

  std::span<const Edge> neighbors(NodeId v) const {
    check_id(v);
    return adj_[static_cast<std::size_t>(v)];
  }

  // Unweighted degree: number of distinct neighbors.
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }

  bool has_edge(NodeId u, NodeId v) const;
  double edge_weight(NodeId u, NodeId v) const;  // 0 when absent

  const std::string& external_id(NodeId v) const {
    check_id(v);
    return names_[static_cast<std::size_t>(v)];
  }
  // -1 when the external id is unknown.
  NodeId find(const std::string& external) const;

  // Unweighted shortest-path hop count, capped; kUnreachable beyond the cap
  // or across components. bfs_distance(v, v) == 0.
  int bfs_distance(NodeId src, NodeId dst, int cap = kDefaultDistanceCap) const;

  // All capped distances from src as (node, hops) pairs, src included at 0.
  std::vector<std::pair<NodeId, int>> bfs_frontier(NodeId src, int cap) const;

  std::map<std::size_t, std::size_t> degree_histogram() const;

  // Component label per node (edges treated as undirected).
  std::vector<int> connected_components(std::size_t* count = nullptr) const;

  void check_id(NodeId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= adj_.size())
      throw Error("invalid node id " + std::to_string(v));
  }

 private:
  friend class GraphBuilder;
  std::vector<std::vector<Edge>> adj_;  // each list sorted by `to`
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> ids_;
  bool directed_ = false;
};

// Accumulates raw edges by external id, then finalizes into a Graph,
// counting dropped self-loops and collapsed duplicates.
class GraphBuilder {
 public:
  explicit GraphBuilder(bool directed) : directed_(directed) {}

  NodeId intern(const std::string& external);
  void add_edge(const std::string& src, const std::string& dst, double weight);
  void add_edge(NodeId src, NodeId dst, double weight);

  Graph build(IngestReport* report = nullptr);

 private:
  struct RawEdge {
    NodeId src, dst;
    double weight;
  };
  bool directed_;
  std::vector<RawEdge> raw_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> ids_;
  std::size_t self_loops_ = 0;
};

// Edge list: UTF-8 text, one edge per line, "src dst [weight]" whitespace
// separated, `#` starts a comment.
Graph load_edge_list(const std::string& path, bool directed,
                     IngestReport* report = nullptr);
void save_edge_list(const Graph& g, const std::string& path);

struct LabelTable {
  std::vector<int> class_of;  // dense node id -> class id, -1 unlabeled
  int class_count = 0;
  std::vector<std::string> class_names;  // dense class id -> external label

  std::size_t labeled_count() const;
  std::vector<NodeId> labeled_nodes() const;
};

// Label file: "node_id class_id" per line, `#` comments.
LabelTable load_labels(const std::string& path, const Graph& g);

}  // namespace ftlsin
