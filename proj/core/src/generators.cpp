#include "ftlsin/generators.hpp"

#include <string>

#include "ftlsin/rng.hpp"

namespace ftlsin {

Graph barabasi_albert(std::size_t nodes, std::size_t attach,
                      std::uint64_t seed) {
  if (nodes < attach + 1) throw Error("barabasi_albert: too few nodes");
  auto rng = make_rng(seed);
  GraphBuilder builder(false);
  for (std::size_t v = 0; v < nodes; ++v) builder.intern("n" + std::to_string(v));

  // Repeated-nodes list: picking uniformly from it is degree-proportional.
  std::vector<NodeId> slots;
  // Seed clique over the first attach+1 nodes.
  for (std::size_t u = 0; u <= attach; ++u)
    for (std::size_t v = u + 1; v <= attach; ++v) {
      builder.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0);
      slots.push_back(static_cast<NodeId>(u));
      slots.push_back(static_cast<NodeId>(v));
    }
  for (std::size_t v = attach + 1; v < nodes; ++v) {
    std::vector<NodeId> chosen;
    while (chosen.size() < attach) {
      NodeId t = slots[uniform_index(rng, slots.size())];
      bool dup = false;
      for (NodeId c : chosen) dup |= (c == t);
      if (!dup) chosen.push_back(t);
    }
    for (NodeId t : chosen) {
      builder.add_edge(static_cast<NodeId>(v), t, 1.0);
      slots.push_back(static_cast<NodeId>(v));
      slots.push_back(t);
    }
  }
  return builder.build();
}

SbmResult stochastic_block_model(std::size_t nodes, std::size_t blocks,
                                 double p_in, double p_out, std::uint64_t seed,
                                 double within_keep) {
  if (blocks == 0 || nodes < blocks) throw Error("sbm: bad block count");
  auto rng = make_rng(seed);
  SbmResult res;
  res.community.resize(nodes);
  for (std::size_t v = 0; v < nodes; ++v)
    res.community[v] = static_cast<int>(v * blocks / nodes);

  GraphBuilder builder(false);
  for (std::size_t v = 0; v < nodes; ++v) builder.intern("n" + std::to_string(v));
  for (std::size_t u = 0; u < nodes; ++u)
    for (std::size_t v = u + 1; v < nodes; ++v) {
      const bool intra = res.community[u] == res.community[v];
      const double p = intra ? p_in : p_out;
      if (uniform01(rng) >= p) continue;
      if (intra && within_keep < 1.0 && uniform01(rng) >= within_keep)
        continue;  // subsample intra-community edges
      builder.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0);
    }
  res.graph = builder.build();
  return res;
}

}  // namespace ftlsin
