#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftlsin/graph.hpp"

namespace ftlsin {

enum class CoarsenMethod { LabelPropagation, DegreeBins };
enum class MapMode { Exact, Nearest };

// Interpretation of a super-node's degree when matching target-node degrees.
enum class SuperDegreeSemantics {
  DistinctNeighbors,  // number of adjacent super-nodes (default)
  BoundaryEdges,      // total boundary-edge count
};

// Partition of the source nodes into super-nodes, with induced super-edges
// carrying boundary-edge counts.
struct SuperGraph {
  std::vector<std::vector<NodeId>> members;  // super id -> sorted member ids
  std::vector<int> membership;               // node id -> super id
  // super id -> sorted (adjacent super id, boundary edge count)
  std::vector<std::vector<std::pair<int, std::size_t>>> super_adj;

  std::size_t super_count() const { return members.size(); }
  std::size_t super_degree(int s,
                           SuperDegreeSemantics semantics =
                               SuperDegreeSemantics::DistinctNeighbors) const;
  void check_id(int s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= members.size())
      throw Error("invalid super-node id " + std::to_string(s));
  }
};

// LabelPropagation: synchronous label propagation with lowest-label
// tie-breaking, at most 20 sweeps, then communities larger than
// max_super_size are split by BFS chunking. DegreeBins groups nodes by
// log2-degree bin within connected components. max_super_size == 0 means
// unbounded.
SuperGraph coarsen(const Graph& source, CoarsenMethod method,
                   std::size_t max_super_size, std::uint64_t seed);

// Construct the induced super-edges for an explicit partition.
SuperGraph supergraph_from_membership(const Graph& source,
                                      std::vector<int> membership);

// Exact mode: all super-nodes whose degree equals deg(v); may be empty.
// Nearest mode: super-nodes minimizing |deg(v) - super_degree|; non-empty
// on non-empty super-graphs.
std::vector<int> node_map(const Graph& target, NodeId v, const SuperGraph& sg,
                          MapMode mode,
                          SuperDegreeSemantics semantics =
                              SuperDegreeSemantics::DistinctNeighbors);

struct NodeMapping {
  std::vector<std::vector<int>> map;  // target node id -> super-node ids
  MapMode mode = MapMode::Nearest;
};

NodeMapping map_all_nodes(const Graph& target, const SuperGraph& sg,
                          MapMode mode,
                          SuperDegreeSemantics semantics =
                              SuperDegreeSemantics::DistinctNeighbors);

// Text dump: one line per super-node "id: member,member,...", then one line
// per super-edge "idA idB count". Members are external ids.
void save_supergraph(const SuperGraph& sg, const Graph& source,
                     const std::string& path);
SuperGraph load_supergraph(const std::string& path, const Graph& source);

}  // namespace ftlsin
