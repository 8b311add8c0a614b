// ftlsin: cross-network structure transfer for node embeddings.
//
// Subcommands: walk, coarsen, transfer, embed, eval, pipeline, diagnose,
// validate. Exit codes: 0 success, 1 usage/config error, 2 stage failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ftlsin/generators.hpp"
#include "ftlsin/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ftlsin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStage = 2;

struct WalkFlags {
  double p = 1.0, q = 1.0;
  int length = 80, num_walks = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  bool directed = false;

  void attach(CLI::App* app) {
    app->add_option("--p", p, "Return parameter p (> 0)");
    app->add_option("--q", q, "In-out parameter q (> 0)");
    app->add_option("--walk-length", length, "Walk length l");
    app->add_option("--num-walks", num_walks, "Walks per start node k");
    app->add_option("--seed", seed, "Master RNG seed");
    app->add_option("--threads", threads, "Worker threads (1 = deterministic)");
    app->add_flag("--directed", directed, "Treat the edge list as directed");
  }
  WalkParams params() const {
    WalkParams w;
    w.p = p;
    w.q = q;
    w.length = length;
    w.walks_per_node = num_walks;
    w.seed = seed;
    return w;
  }
};

int cmd_walk(const std::string& edges, const std::string& out,
             const WalkFlags& flags) {
  IngestReport report;
  Graph g = load_edge_list(edges, flags.directed, &report);
  std::cerr << "[load] " << g.node_count() << " nodes, " << report.summary()
            << '\n';
  WalkSet ws = generate_walk_set(g, flags.params(), flags.threads);
  save_walks(ws, g, out);
  std::cerr << "[walk] " << ws.walks.size() << " walks written to " << out
            << " (" << ws.truncated << " truncated at sinks)\n";
  return kExitOk;
}

int cmd_coarsen(const std::string& edges, const std::string& out,
                const std::string& method, std::size_t max_super_size,
                std::uint64_t seed, bool directed) {
  CoarsenMethod m;
  if (method == "label_propagation")
    m = CoarsenMethod::LabelPropagation;
  else if (method == "degree_bins")
    m = CoarsenMethod::DegreeBins;
  else {
    std::cerr << "unknown --coarsen-method " << method << '\n';
    return kExitUsage;
  }
  Graph g = load_edge_list(edges, directed);
  SuperGraph sg = coarsen(g, m, max_super_size, seed);
  save_supergraph(sg, g, out);
  std::cerr << "[coarsen] " << sg.super_count() << " super-nodes written to "
            << out << '\n';
  return kExitOk;
}

int cmd_transfer(const std::string& source_edges,
                 const std::string& target_edges,
                 const std::string& source_walks_path,
                 const std::string& supergraph_path, const std::string& out,
                 const std::string& map_mode, double virtual_weight,
                 int distance_cap, double beta_override, bool directed,
                 int threads) {
  MapMode mode;
  if (map_mode == "exact")
    mode = MapMode::Exact;
  else if (map_mode == "nearest")
    mode = MapMode::Nearest;
  else {
    std::cerr << "unknown --map-mode " << map_mode << '\n';
    return kExitUsage;
  }
  Graph source = load_edge_list(source_edges, directed);
  Graph target = load_edge_list(target_edges, directed);
  WalkSet walks = load_walks(source_walks_path, source);
  SuperGraph sg = load_supergraph(supergraph_path, source);
  NodeMapping mapping = map_all_nodes(target, sg, mode);
  TransferParams params;
  params.virtual_weight = virtual_weight;
  params.distance_cap = distance_cap;
  double beta = beta_override >= 0
                    ? beta_override
                    : compute_beta(target.node_count(), source.node_count());
  PairWeights weights(source, sg, walks, distance_cap);
  Graph reweighted =
      reweight_target(target, mapping, weights, beta, params, &sg, threads);
  save_edge_list(reweighted, out);
  std::cerr << "[transfer] beta=" << beta << ", reweighted target written to "
            << out << '\n';
  return kExitOk;
}

int cmd_embed(const std::string& edges, const std::string& walks_path,
              const std::string& out, const TrainConfig& cfg_in,
              const std::string& mode, bool directed) {
  TrainConfig cfg = cfg_in;
  if (mode == "exact_softmax")
    cfg.mode = TrainMode::ExactSoftmax;
  else if (mode == "negative_sampling")
    cfg.mode = TrainMode::NegativeSampling;
  else {
    std::cerr << "unknown --mode " << mode << '\n';
    return kExitUsage;
  }
  Graph g = load_edge_list(edges, directed);
  WalkSet ws = load_walks(walks_path, g);
  EmbeddingMatrix emb = train(ws, g.node_count(), cfg);
  export_embeddings(emb, g, out);
  std::cerr << "[embed] " << emb.nodes << " x " << emb.dim
            << " embeddings written to " << out << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& edges, const std::string& embeddings_path,
             const std::string& labels_path, const std::string& out_prefix,
             const std::vector<double>& fractions, int repeats, double lambda,
             std::uint64_t seed, int threads, bool directed) {
  Graph g = load_edge_list(edges, directed);
  EmbeddingMatrix emb = import_embeddings(embeddings_path, g);
  LabelTable labels = load_labels(labels_path, g);
  ProtocolConfig pc;
  if (!fractions.empty()) pc.fractions = fractions;
  pc.repeats = repeats;
  pc.linear.lambda = lambda;
  pc.seed = seed;
  pc.threads = threads;
  EvalReport report = run_protocol(emb, labels, pc);
  std::cout << report.to_text();
  if (!out_prefix.empty()) {
    std::ofstream(out_prefix + ".txt") << report.to_text();
    std::ofstream(out_prefix + ".json") << report.to_json();
  }
  return kExitOk;
}

int cmd_diagnose(const std::string& edges, const std::string& walks_path,
                 const std::string& csv, const WalkFlags& flags) {
  Graph g = load_edge_list(edges, flags.directed);
  std::vector<double> values;
  if (!walks_path.empty()) {
    WalkSet ws = load_walks(walks_path, g);
    auto freq = walk_frequency_histogram(ws);
    for (const auto& [_, count] : freq)
      values.push_back(static_cast<double>(count));
  } else {
    for (std::size_t v = 0; v < g.node_count(); ++v)
      values.push_back(static_cast<double>(g.degree(static_cast<NodeId>(v))));
  }
  PowerLawFit fit = diagnose_powerlaw(values, csv);
  if (fit.defined)
    std::cout << "slope=" << fit.slope << " r2=" << fit.r_squared
              << " points=" << fit.points_used << '\n';
  else
    std::cout << "slope=undefined (degenerate distribution)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FTLSIN cross-network structure-transfer pipeline"};
  app.require_subcommand(1);

  // walk
  auto* walk = app.add_subcommand("walk", "Generate biased random walks");
  std::string walk_edges, walk_out = "walks.txt";
  WalkFlags walk_flags;
  walk->add_option("--edges", walk_edges, "Edge list file")->required();
  walk->add_option("--out", walk_out, "Output walk file");
  walk_flags.attach(walk);

  // coarsen
  auto* co = app.add_subcommand("coarsen", "Coarsen a graph to a super-graph");
  std::string co_edges, co_out = "supergraph.txt", co_method = "label_propagation";
  std::size_t co_max = 0;
  std::uint64_t co_seed = 1;
  bool co_directed = false;
  co->add_option("--edges", co_edges, "Edge list file")->required();
  co->add_option("--out", co_out, "Output super-graph dump");
  co->add_option("--coarsen-method", co_method,
                 "label_propagation or degree_bins");
  co->add_option("--max-super-size", co_max, "Max nodes per super-node (0 = unbounded)");
  co->add_option("--seed", co_seed, "RNG seed");
  co->add_flag("--directed", co_directed, "Directed edge list");

  // transfer
  auto* tr = app.add_subcommand(
      "transfer", "Learn target edge weights from source walks");
  std::string tr_source, tr_target, tr_walks, tr_sg, tr_out = "target_reweighted.edges";
  std::string tr_mode = "nearest";
  double tr_virtual = 1.0, tr_beta = -1.0;
  int tr_cap = kDefaultDistanceCap, tr_threads = 1;
  bool tr_directed = false;
  tr->add_option("--source-edges", tr_source, "Source edge list")->required();
  tr->add_option("--target-edges", tr_target, "Target edge list")->required();
  tr->add_option("--source-walks", tr_walks, "Source walk file")->required();
  tr->add_option("--supergraph", tr_sg, "Super-graph dump")->required();
  tr->add_option("--out", tr_out, "Output reweighted target edge list");
  tr->add_option("--map-mode", tr_mode, "exact or nearest");
  tr->add_option("--virtual-weight", tr_virtual, "Intrinsic target edge weight");
  tr->add_option("--distance-cap", tr_cap, "BFS distance cap");
  tr->add_option("--beta-override", tr_beta, "Override beta (testing only)");
  tr->add_option("--threads", tr_threads, "Worker threads");
  tr->add_flag("--directed", tr_directed, "Directed edge lists");

  // embed
  auto* em = app.add_subcommand("embed", "Train Skip-gram embeddings from walks");
  std::string em_edges, em_walks, em_out = "embeddings.txt";
  std::string em_mode = "negative_sampling";
  TrainConfig em_cfg;
  bool em_directed = false;
  em->add_option("--edges", em_edges, "Edge list file")->required();
  em->add_option("--walks", em_walks, "Walk file")->required();
  em->add_option("--out", em_out, "Output embedding file");
  em->add_option("--dim", em_cfg.dim, "Embedding dimension d");
  em->add_option("--window", em_cfg.window, "Context window r");
  em->add_option("--epochs", em_cfg.epochs, "Training epochs");
  em->add_option("--lr", em_cfg.lr_initial, "Initial learning rate");
  em->add_option("--mode", em_mode, "exact_softmax or negative_sampling");
  em->add_option("--negatives", em_cfg.negatives, "Negative samples per pair");
  em->add_option("--seed", em_cfg.seed, "RNG seed");
  em->add_option("--threads", em_cfg.threads, "Worker threads (1 = deterministic)");
  em->add_flag("--directed", em_directed, "Directed edge list");

  // eval
  auto* ev = app.add_subcommand("eval", "Linear OVR classification protocol");
  std::string ev_edges, ev_emb, ev_labels, ev_out;
  std::vector<double> ev_fractions;
  int ev_repeats = 10, ev_threads = 1;
  double ev_lambda = 1e-4;
  std::uint64_t ev_seed = 1;
  bool ev_directed = false;
  ev->add_option("--edges", ev_edges, "Edge list file")->required();
  ev->add_option("--embeddings", ev_emb, "Embedding file")->required();
  ev->add_option("--labels", ev_labels, "Label file")->required();
  ev->add_option("--out", ev_out, "Report file prefix (.txt/.json)");
  ev->add_option("--fractions", ev_fractions, "Training fractions")->delimiter(',');
  ev->add_option("--repeats", ev_repeats, "Repeats per fraction");
  ev->add_option("--lambda", ev_lambda, "L2 regularization");
  ev->add_option("--seed", ev_seed, "RNG seed");
  ev->add_option("--threads", ev_threads, "Worker threads");
  ev->add_flag("--directed", ev_directed, "Directed edge list");

  // pipeline
  auto* pi = app.add_subcommand("pipeline", "Run the full pipeline from a config");
  std::string pi_config, pi_from = "source_walks";
  bool pi_skip_transfer = false;
  int pi_threads = 0;
  pi->add_option("config", pi_config, "Pipeline config file")->required();
  pi->add_option("--from-stage", pi_from,
                 "Resume from stage (source_walks, coarsen, transfer, "
                 "target_walks, embed, eval)");
  pi->add_flag("--skip-transfer", pi_skip_transfer,
               "Bottom layer only (plain biased walks on the target)");
  pi->add_option("--threads", pi_threads, "Override configured thread count");

  // diagnose
  auto* di = app.add_subcommand("diagnose", "Power-law rank-frequency diagnostic");
  std::string di_edges, di_walks, di_csv = "rank_frequency.csv";
  WalkFlags di_flags;
  di->add_option("--edges", di_edges, "Edge list file")->required();
  di->add_option("--walks", di_walks,
                 "Walk file (walk-frequency diagnostic instead of degrees)");
  di->add_option("--csv", di_csv, "Output CSV of rank/frequency points");
  di->add_flag("--directed", di_flags.directed, "Directed edge list");

  // validate
  auto* va = app.add_subcommand("validate", "Validate a pipeline config");
  std::string va_config;
  va->add_option("config", va_config, "Pipeline config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (walk->parsed()) return cmd_walk(walk_edges, walk_out, walk_flags);
    if (co->parsed())
      return cmd_coarsen(co_edges, co_out, co_method, co_max, co_seed,
                         co_directed);
    if (tr->parsed())
      return cmd_transfer(tr_source, tr_target, tr_walks, tr_sg, tr_out,
                          tr_mode, tr_virtual, tr_cap, tr_beta, tr_directed,
                          tr_threads);
    if (em->parsed())
      return cmd_embed(em_edges, em_walks, em_out, em_cfg, em_mode,
                       em_directed);
    if (ev->parsed())
      return cmd_eval(ev_edges, ev_emb, ev_labels, ev_out, ev_fractions,
                      ev_repeats, ev_lambda, ev_seed, ev_threads, ev_directed);
    if (di->parsed()) return cmd_diagnose(di_edges, di_walks, di_csv, di_flags);
    if (va->parsed()) {
      ConfigResult res = validate_config(va_config);
      if (res.ok()) {
        std::cout << "config ok\n";
        return kExitOk;
      }
      for (const auto& e : res.errors) std::cerr << "error: " << e << '\n';
      return kExitUsage;
    }
    if (pi->parsed()) {
      ConfigResult res = validate_config(pi_config);
      if (!res.ok()) {
        for (const auto& e : res.errors) std::cerr << "error: " << e << '\n';
        return kExitUsage;
      }
      Stage from;
      if (!parse_stage(pi_from, from)) {
        std::cerr << "unknown --from-stage " << pi_from << '\n';
        return kExitUsage;
      }
      if (pi_skip_transfer) res.config.skip_transfer = true;
      if (pi_threads > 0) {
        res.config.threads = pi_threads;
        res.config.embed.threads = pi_threads;
      }
      try {
        run_pipeline(res.config, from, &std::cerr);
      } catch (const StageFailure& f) {
        std::cerr << "stage failed: " << f.what() << '\n';
        return kExitStage;
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
  return kExitUsage;
}
