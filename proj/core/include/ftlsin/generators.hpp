#pragma once

#include <cstdint>
#include <vector>

#include "ftlsin/graph.hpp"

namespace ftlsin {

// Preferential-attachment graph: each new node attaches to `attach` existing
// nodes with probability proportional to degree.
Graph barabasi_albert(std::size_t nodes, std::size_t attach,
                      std::uint64_t seed);

// Stochastic block model. within_keep subsamples intra-community edges after
// generation (1.0 keeps everything). Community of node i is i * blocks / n.
struct SbmResult {
  Graph graph;
  std::vector<int> community;
};
SbmResult stochastic_block_model(std::size_t nodes, std::size_t blocks,
                                 double p_in, double p_out, std::uint64_t seed,
                                 double within_keep = 1.0);

}  // namespace ftlsin
