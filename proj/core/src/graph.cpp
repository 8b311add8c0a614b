#include "ftlsin/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace ftlsin {

std::string IngestReport::summary() const {
  std::ostringstream os;
  os << "lines=" << lines_read << " edges=" << edges_kept
     << " self_loops_dropped=" << self_loops_dropped
     << " duplicates_collapsed=" << duplicates_collapsed
     << " components=" << component_count
     << " largest_component=" << largest_component;
  return os.str();
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adj_) total += list.size();
  return directed_ ? total : total / 2;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto list = neighbors(u);
  check_id(v);
  auto it = std::lower_bound(
      list.begin(), list.end(), v,
      [](const Edge& e, NodeId id) { return e.to < id; });
  return it != list.end() && it->to == v;
}

double Graph::edge_weight(NodeId u, NodeId v) const {
  auto list = neighbors(u);
  check_id(v);
  auto it = std::lower_bound(
      list.begin(), list.end(), v,
      [](const Edge& e, NodeId id) { return e.to < id; });
  return (it != list.end() && it->to == v) ? it->weight : 0.0;
}

NodeId Graph::find(const std::string& external) const {
  auto it = ids_.find(external);
  return it == ids_.end() ? NodeId{-1} : it->second;
}

int Graph::bfs_distance(NodeId src, NodeId dst, int cap) const {
  check_id(src);
  check_id(dst);
  if (src == dst) return 0;
  if (cap < 1) return kUnreachable;
  std::vector<int> dist(node_count(), kUnreachable);
  dist[static_cast<std::size_t>(src)] = 0;
  std::deque<NodeId> queue{src};
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    int d = dist[static_cast<std::size_t>(v)];
    if (d >= cap) continue;
    for (const Edge& e : adj_[static_cast<std::size_t>(v)]) {
      auto& dn = dist[static_cast<std::size_t>(e.to)];
      if (dn != kUnreachable) continue;
      dn = d + 1;
      if (e.to == dst) return dn;
      queue.push_back(e.to);
    }
  }
  return kUnreachable;
}

std::vector<std::pair<NodeId, int>> Graph::bfs_frontier(NodeId src,
                                                        int cap) const {
  check_id(src);
  std::vector<int> dist(node_count(), kUnreachable);
  dist[static_cast<std::size_t>(src)] = 0;
  std::vector<std::pair<NodeId, int>> out{{src, 0}};
  std::deque<NodeId> queue{src};
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    int d = dist[static_cast<std::size_t>(v)];
    if (d >= cap) continue;
    for (const Edge& e : adj_[static_cast<std::size_t>(v)]) {
      auto& dn = dist[static_cast<std::size_t>(e.to)];
      if (dn != kUnreachable) continue;
      dn = d + 1;
      out.emplace_back(e.to, dn);
      queue.push_back(e.to);
    }
  }
  return out;
}

std::map<std::size_t, std::size_t> Graph::degree_histogram() const {
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t v = 0; v < adj_.size(); ++v) ++hist[adj_[v].size()];
  return hist;
}

std::vector<int> Graph::connected_components(std::size_t* count) const {
  std::vector<int> comp(node_count(), -1);
  int next = 0;
  std::deque<NodeId> queue;
  for (std::size_t s = 0; s < node_count(); ++s) {
    if (comp[s] != -1) continue;
    comp[s] = next;
    queue.push_back(static_cast<NodeId>(s));
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      for (const Edge& e : adj_[static_cast<std::size_t>(v)]) {
        if (comp[static_cast<std::size_t>(e.to)] == -1) {
          comp[static_cast<std::size_t>(e.to)] = next;
          queue.push_back(e.to);
        }
      }
    }
    ++next;
  }
  // Directed graphs: symmetrize by also following reverse edges. The forward
  // sweep above already merges most nodes; finish with a union pass.
  if (directed_) {
    // Union-find over forward edges treated as undirected.
    std::vector<int> parent(node_count());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto root = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (std::size_t v = 0; v < node_count(); ++v)
      for (const Edge& e : adj_[v]) {
        int a = root(static_cast<int>(v)), b = root(e.to);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
      }
    std::unordered_map<int, int> relabel;
    for (std::size_t v = 0; v < node_count(); ++v) {
      int r = root(static_cast<int>(v));
      auto [it, fresh] = relabel.emplace(r, static_cast<int>(relabel.size()));
      comp[v] = it->second;
      (void)fresh;
    }
    next = static_cast<int>(relabel.size());
  }
  if (count) *count = static_cast<std::size_t>(next);
  return comp;
}

NodeId GraphBuilder::intern(const std::string& external) {
  auto it = ids_.find(external);
  if (it != ids_.end()) return it->second;
  NodeId id = static_cast<NodeId>(names_.size());
  names_.push_back(external);
  ids_.emplace(external, id);
  return id;
}

void GraphBuilder::add_edge(const std::string& src, const std::string& dst,
                            double weight) {
  // Intern in a fixed order; argument evaluation order is unspecified and
  // dense ids must not depend on the compiler.
  NodeId s = intern(src);
  NodeId d = intern(dst);
  add_edge(s, d, weight);
}

void GraphBuilder::add_edge(NodeId src, NodeId dst, double weight) {
  if (weight < 0) throw Error("negative edge weight");
  if (src == dst) {
    ++self_loops_;
    return;
  }
  raw_.push_back({src, dst, weight});
}

Graph GraphBuilder::build(IngestReport* report) {
  Graph g;
  g.directed_ = directed_;
  g.names_ = std::move(names_);
  g.ids_ = std::move(ids_);
  g.adj_.resize(g.names_.size());

  for (const RawEdge& e : raw_) {
    g.adj_[static_cast<std::size_t>(e.src)].push_back({e.dst, e.weight});
    if (!directed_)
      g.adj_[static_cast<std::size_t>(e.dst)].push_back({e.src, e.weight});
  }

  std::size_t collapsed_entries = 0;
  for (auto& list : g.adj_) {
    std::sort(list.begin(), list.end(),
              [](const Graph::Edge& a, const Graph::Edge& b) {
                return a.to < b.to;
              });
    std::size_t w = 0;
    for (std::size_t r = 0; r < list.size(); ++r) {
      if (w > 0 && list[w - 1].to == list[r].to) {
        list[w - 1].weight += list[r].weight;
        ++collapsed_entries;
      } else {
        list[w++] = list[r];
      }
    }
    list.resize(w);
  }

  if (report) {
    report->edges_kept = g.edge_count();
    report->self_loops_dropped = self_loops_;
    report->duplicates_collapsed =
        directed_ ? collapsed_entries : collapsed_entries / 2;
    std::size_t count = 0;
    auto comp = g.connected_components(&count);
    report->component_count = count;
    std::vector<std::size_t> sizes(count, 0);
    for (int c : comp) ++sizes[static_cast<std::size_t>(c)];
    report->largest_component =
        sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
  }
  raw_.clear();
  return g;
}

Graph load_edge_list(const std::string& path, bool directed,
                     IngestReport* report) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list: " + path);
  GraphBuilder builder(directed);
  std::string line;
  std::size_t lineno = 0, lines_read = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string src, dst, tail;
    if (!(ls >> src)) continue;  // blank or comment-only line
    ++lines_read;
    double weight = 1.0;
    if (!(ls >> dst))
      throw Error(path + ":" + std::to_string(lineno) +
                  ": malformed line, expected \"src dst [weight]\"");
    if (ls >> tail) {
      std::size_t pos = 0;
      try {
        weight = std::stod(tail, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tail.size())
        throw Error(path + ":" + std::to_string(lineno) +
                    ": malformed weight \"" + tail + "\"");
      if (weight < 0)
        throw Error(path + ":" + std::to_string(lineno) +
                    ": negative weight");
      if (ls >> tail)
        throw Error(path + ":" + std::to_string(lineno) +
                    ": trailing fields");
    }
    builder.add_edge(src, dst, weight);
  }
  IngestReport local;
  Graph g = builder.build(&local);
  local.lines_read = lines_read;
  if (report) *report = local;
  return g;
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write edge list: " + path);
  out.precision(17);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    for (const Graph::Edge& e : g.neighbors(static_cast<NodeId>(v))) {
      if (!g.directed() && e.to < static_cast<NodeId>(v)) continue;
      out << g.external_id(static_cast<NodeId>(v)) << ' '
          << g.external_id(e.to);
      if (e.weight != 1.0) out << ' ' << e.weight;
      out << '\n';
    }
  }
  if (!out) throw Error("write failed: " + path);
}

std::size_t LabelTable::labeled_count() const {
  std::size_t n = 0;
  for (int c : class_of) n += (c >= 0);
  return n;
}

std::vector<NodeId> LabelTable::labeled_nodes() const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < class_of.size(); ++v)
    if (class_of[v] >= 0) out.push_back(static_cast<NodeId>(v));
  return out;
}

LabelTable load_labels(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file: " + path);
  LabelTable table;
  table.class_of.assign(g.node_count(), -1);
  std::unordered_map<std::string, int> class_ids;
  std::string line;
  std::size_t lineno = 0, labeled = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string node, cls;
    if (!(ls >> node)) continue;
    if (!(ls >> cls))
      throw Error(path + ":" + std::to_string(lineno) +
                  ": malformed line, expected \"node_id class_id\"");
    NodeId v = g.find(node);
    if (v < 0)
      throw Error(path + ":" + std::to_string(lineno) + ": unknown node \"" +
                  node + "\"");
    auto [it, fresh] = class_ids.emplace(cls, static_cast<int>(class_ids.size()));
    if (fresh) table.class_names.push_back(cls);
    table.class_of[static_cast<std::size_t>(v)] = it->second;
    ++labeled;
  }
  if (labeled == 0) throw Error("label file is empty: " + path);
  table.class_count = static_cast<int>(class_ids.size());
  return table;
}

}  // namespace ftlsin
