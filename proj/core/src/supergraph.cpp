#include "ftlsin/supergraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include "ftlsin/rng.hpp"

namespace ftlsin {

std::size_t SuperGraph::super_degree(int s,
                                     SuperDegreeSemantics semantics) const {
  check_id(s);
  const auto& adj = super_adj[static_cast<std::size_t>(s)];
  if (semantics == SuperDegreeSemantics::DistinctNeighbors) return adj.size();
  std::size_t total = 0;
  for (const auto& [_, count] : adj) total += count;
  return total;
}

namespace {

// Split an oversized community into BFS chunks of at most max_size nodes.
void bfs_chunk(const Graph& g, const std::vector<NodeId>& community,
               std::size_t max_size, std::vector<int>& membership,
               int& next_label) {
  std::vector<char> in_community(g.node_count(), 0);
  std::vector<char> assigned(g.node_count(), 0);
  for (NodeId v : community) in_community[static_cast<std::size_t>(v)] = 1;
  for (NodeId seed : community) {
    if (assigned[static_cast<std::size_t>(seed)]) continue;
    int label = next_label++;
    std::size_t chunk = 0;
    std::deque<NodeId> queue{seed};
    assigned[static_cast<std::size_t>(seed)] = 1;
    while (!queue.empty() && chunk < max_size) {
      NodeId v = queue.front();
      queue.pop_front();
      membership[static_cast<std::size_t>(v)] = label;
      ++chunk;
      for (const Graph::Edge& e : g.neighbors(v)) {
        std::size_t t = static_cast<std::size_t>(e.to);
        if (in_community[t] && !assigned[t]) {
          assigned[t] = 1;
          queue.push_back(e.to);
        }
      }
    }
    // Nodes already queued past the size cut start fresh chunks.
    for (NodeId v : queue) assigned[static_cast<std::size_t>(v)] = 0;
  }
}

std::vector<int> label_propagation(const Graph& g, std::size_t max_super_size) {
  const std::size_t n = g.node_count();
  std::vector<int> label(n);
  for (std::size_t v = 0; v < n; ++v) label[v] = static_cast<int>(v);

  constexpr int kMaxSweeps = 20;
  std::vector<int> next(n);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      auto nbrs = g.neighbors(static_cast<NodeId>(v));
      if (nbrs.empty()) {
        next[v] = label[v];
        continue;
      }
      // Most frequent neighbor label, lowest label on ties.
      std::map<int, std::size_t> votes;
      for (const Graph::Edge& e : nbrs)
        ++votes[label[static_cast<std::size_t>(e.to)]];
      int best = label[v];
      std::size_t best_count = 0;
      for (const auto& [lbl, count] : votes) {
        if (count > best_count) {
          best = lbl;
          best_count = count;
        }
      }
      next[v] = best;
      changed |= (next[v] != label[v]);
    }
    label.swap(next);
    if (!changed) break;
  }

  // Group by final label, then enforce the size cap.
  std::map<int, std::vector<NodeId>> groups;
  for (std::size_t v = 0; v < n; ++v)
    groups[label[v]].push_back(static_cast<NodeId>(v));
  std::vector<int> membership(n, -1);
  int next_label = 0;
  for (auto& [_, nodes] : groups) {
    if (max_super_size > 0 && nodes.size() > max_super_size) {
      bfs_chunk(g, nodes, max_super_size, membership, next_label);
    } else {
      int lbl = next_label++;
      for (NodeId v : nodes) membership[static_cast<std::size_t>(v)] = lbl;
    }
  }
  return membership;
}

std::vector<int> degree_bins(const Graph& g, std::size_t max_super_size) {
  const std::size_t n = g.node_count();
  std::size_t comp_count = 0;
  auto comp = g.connected_components(&comp_count);
  // (component, log2 degree bin) -> group
  std::map<std::pair<int, int>, std::vector<NodeId>> groups;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t d = g.degree(static_cast<NodeId>(v));
    int bin = d == 0 ? -1 : static_cast<int>(std::floor(std::log2(double(d))));
    groups[{comp[v], bin}].push_back(static_cast<NodeId>(v));
  }
  std::vector<int> membership(n, -1);
  int next_label = 0;
  for (auto& [_, nodes] : groups) {
    if (max_super_size > 0 && nodes.size() > max_super_size) {
      for (std::size_t i = 0; i < nodes.size(); i += max_super_size) {
        int lbl = next_label++;
        std::size_t end = std::min(i + max_super_size, nodes.size());
        for (std::size_t j = i; j < end; ++j)
          membership[static_cast<std::size_t>(nodes[j])] = lbl;
      }
    } else {
      int lbl = next_label++;
      for (NodeId v : nodes) membership[static_cast<std::size_t>(v)] = lbl;
    }
  }
  return membership;
}

}  // namespace

SuperGraph supergraph_from_membership(const Graph& source,
                                      std::vector<int> membership) {
  if (membership.size() != source.node_count())
    throw Error("membership size mismatch");
  int max_label = -1;
  for (int m : membership) max_label = std::max(max_label, m);
  SuperGraph sg;
  sg.membership = std::move(membership);
  sg.members.resize(static_cast<std::size_t>(max_label + 1));
  for (std::size_t v = 0; v < sg.membership.size(); ++v) {
    if (sg.membership[v] < 0) throw Error("membership is not total");
    sg.members[static_cast<std::size_t>(sg.membership[v])].push_back(
        static_cast<NodeId>(v));
  }
  for (auto& m : sg.members)
    if (m.empty()) throw Error("empty super-node in membership");

  sg.super_adj.resize(sg.members.size());
  std::map<std::pair<int, int>, std::size_t> boundary;
  for (std::size_t v = 0; v < source.node_count(); ++v) {
    int a = sg.membership[v];
    for (const Graph::Edge& e : source.neighbors(static_cast<NodeId>(v))) {
      int b = sg.membership[static_cast<std::size_t>(e.to)];
      if (a == b) continue;
      if (!source.directed() && e.to < static_cast<NodeId>(v)) continue;
      ++boundary[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [pair, count] : boundary) {
    sg.super_adj[static_cast<std::size_t>(pair.first)].emplace_back(pair.second,
                                                                    count);
    sg.super_adj[static_cast<std::size_t>(pair.second)].emplace_back(
        pair.first, count);
  }
  for (auto& adj : sg.super_adj) std::sort(adj.begin(), adj.end());
  return sg;
}

SuperGraph coarsen(const Graph& source, CoarsenMethod method,
                   std::size_t max_super_size, std::uint64_t seed) {
  if (source.node_count() == 0) throw Error("cannot coarsen an empty graph");
  (void)seed;  // both methods are deterministic; seed reserved for future methods
  std::vector<int> membership =
      method == CoarsenMethod::LabelPropagation
          ? label_propagation(source, max_super_size)
          : degree_bins(source, max_super_size);
  return supergraph_from_membership(source, std::move(membership));
}

std::vector<int> node_map(const Graph& target, NodeId v, const SuperGraph& sg,
                          MapMode mode, SuperDegreeSemantics semantics) {
  target.check_id(v);
  if (sg.super_count() == 0) throw Error("empty super-graph");
  const std::size_t deg = target.degree(v);
  std::vector<int> out;
  if (mode == MapMode::Exact) {
    for (std::size_t s = 0; s < sg.super_count(); ++s)
      if (sg.super_degree(static_cast<int>(s), semantics) == deg)
        out.push_back(static_cast<int>(s));
  } else {
    long long best = -1;
    for (std::size_t s = 0; s < sg.super_count(); ++s) {
      long long diff = std::llabs(
          static_cast<long long>(sg.super_degree(static_cast<int>(s), semantics)) -
          static_cast<long long>(deg));
      if (best < 0 || diff < best) {
        best = diff;
        out.clear();
      }
      if (diff == best) out.push_back(static_cast<int>(s));
    }
  }
  return out;
}

NodeMapping map_all_nodes(const Graph& target, const SuperGraph& sg,
                          MapMode mode, SuperDegreeSemantics semantics) {
  NodeMapping nm;
  nm.mode = mode;
  nm.map.resize(target.node_count());
  for (std::size_t v = 0; v < target.node_count(); ++v)
    nm.map[v] = node_map(target, static_cast<NodeId>(v), sg, mode, semantics);
  return nm;
}

void save_supergraph(const SuperGraph& sg, const Graph& source,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write super-graph dump: " + path);
  for (std::size_t s = 0; s < sg.super_count(); ++s) {
    out << s << ':';
    const auto& m = sg.members[s];
    for (std::size_t i = 0; i < m.size(); ++i)
      out << (i ? "," : " ") << source.external_id(m[i]);
    out << '\n';
  }
  for (std::size_t s = 0; s < sg.super_count(); ++s)
    for (const auto& [t, count] : sg.super_adj[s])
      if (static_cast<std::size_t>(t) > s)
        out << s << ' ' << t << ' ' << count << '\n';
  if (!out) throw Error("write failed: " + path);
}

SuperGraph load_supergraph(const std::string& path, const Graph& source) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open super-graph dump: " + path);
  std::vector<int> membership(source.node_count(), -1);
  std::string line;
  while (std::getline(in, line)) {
    auto colon = line.find(':');
    if (colon == std::string::npos) break;  // super-edge section follows
    int super_id = std::stoi(line.substr(0, colon));
    std::istringstream rest(line.substr(colon + 1));
    std::string members;
    rest >> members;
    std::istringstream ms(members);
    std::string tok;
    while (std::getline(ms, tok, ',')) {
      NodeId v = source.find(tok);
      if (v < 0) throw Error("super-graph member not in graph: " + tok);
      membership[static_cast<std::size_t>(v)] = super_id;
    }
  }
  // Super-edges are recomputed from the source graph; the dump's edge lines
  // are for human inspection.
  return supergraph_from_membership(source, std::move(membership));
}

}  // namespace ftlsin
