#include <benchmark/benchmark.h>

#include "ftlsin/generators.hpp"
#include "ftlsin/transfer.hpp"

namespace {

using namespace ftlsin;

const Graph& ba_graph() {
  static Graph g = barabasi_albert(5000, 2, 42);
  return g;
}

void BM_WalkSet(benchmark::State& state) {
  const Graph& g = ba_graph();
  WalkParams params;
  params.length = 40;
  params.walks_per_node = 1;
  params.p = 2.0;
  params.q = 0.5;
  params.seed = 7;
  for (auto _ : state) {
    auto ws = generate_walk_set(g, params, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(ws.walks.data());
  }
}
BENCHMARK(BM_WalkSet)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BfsDistance(benchmark::State& state) {
  const Graph& g = ba_graph();
  NodeId src = 0;
  for (auto _ : state) {
    for (NodeId dst = 1; dst < 200; ++dst)
      benchmark::DoNotOptimize(g.bfs_distance(src, dst, kDefaultDistanceCap));
  }
}
BENCHMARK(BM_BfsDistance)->Unit(benchmark::kMillisecond);

void BM_PairWeight(benchmark::State& state) {
  const Graph& g = ba_graph();
  WalkParams params;
  params.length = 40;
  params.walks_per_node = 2;
  params.seed = 7;
  WalkSet ws = generate_walk_set(g, params, 4);
  SuperGraph sg = coarsen(g, CoarsenMethod::LabelPropagation, 50, 1);
  for (auto _ : state) {
    PairWeights weights(g, sg, ws);
    double total = 0;
    for (int b = 1; b < std::min<int>(16, static_cast<int>(sg.super_count()));
         ++b)
      total += weights.pair_weight(0, b).weight;
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_PairWeight)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
