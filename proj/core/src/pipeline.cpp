#include "ftlsin/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ftlsin/generators.hpp"
#include "ftlsin/rng.hpp"

namespace fs = std::filesystem;

namespace ftlsin {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::SourceWalks: return "source_walks";
    case Stage::Coarsen: return "coarsen";
    case Stage::Transfer: return "transfer";
    case Stage::TargetWalks: return "target_walks";
    case Stage::Embed: return "embed";
    case Stage::Eval: return "eval";
  }
  return "?";
}

bool parse_stage(const std::string& name, Stage& out) {
  for (Stage s : {Stage::SourceWalks, Stage::Coarsen, Stage::Transfer,
                  Stage::TargetWalks, Stage::Embed, Stage::Eval}) {
    if (name == stage_name(s)) {
      out = s;
      return true;
    }
  }
  return false;
}

namespace {

class Manifest {
 public:
  explicit Manifest(const PipelineConfig& cfg) {
    entries_ << "  \"config_hash\": \"" << std::hex
             << fnv1a_hash(canonical_config(cfg)) << std::dec << "\",\n"
             << "  \"seed\": " << cfg.seed << ",\n"
             << "  \"threads\": " << cfg.threads << ",\n";
  }

  void add_stage(const std::string& stage, const std::string& params,
                 double seconds) {
    stages_.push_back("    {\"stage\": \"" + stage + "\", \"params\": \"" +
                      params + "\", \"seconds\": " + std::to_string(seconds) +
                      "}");
  }
  void add_artifact(const std::string& dir, const std::string& name) {
    std::ostringstream h;
    h << std::hex << hash_file((fs::path(dir) / name).string());
    artifacts_.push_back("    {\"file\": \"" + name + "\", \"fnv1a64\": \"" +
                         h.str() + "\"}");
  }

  void write(const std::string& dir, const PipelineConfig& cfg) const {
    std::ofstream out(fs::path(dir) / artifact::kManifest);
    out << "{\n" << entries_.str();
    out << "  \"canonical_config\": " << quoted(canonical_config(cfg)) << ",\n";
    out << "  \"stages\": [\n";
    for (std::size_t i = 0; i < stages_.size(); ++i)
      out << stages_[i] << (i + 1 < stages_.size() ? "," : "") << '\n';
    out << "  ],\n  \"artifacts\": [\n";
    for (std::size_t i = 0; i < artifacts_.size(); ++i)
      out << artifacts_[i] << (i + 1 < artifacts_.size() ? "," : "") << '\n';
    out << "  ]\n}\n";
  }

 private:
  static std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '\n')
        out += "\\n";
      else if (c == '"')
        out += "\\\"";
      else if (c == '\\')
        out += "\\\\";
      else
        out += c;
    }
    return out + "\"";
  }
  std::ostringstream entries_;
  std::vector<std::string> stages_;
  std::vector<std::string> artifacts_;
};

class StageTimer {
 public:
  explicit StageTimer(std::ostream* log, const std::string& name)
      : log_(log), name_(name), start_(std::chrono::steady_clock::now()) {
    if (log_) *log_ << "[stage] " << name_ << " ..." << std::endl;
  }
  double stop() {
    const double s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start_)
                         .count();
    if (log_) *log_ << "[stage] " << name_ << " done in " << s << " s" << std::endl;
    return s;
  }

 private:
  std::ostream* log_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

PowerLawFit diagnose_powerlaw(const std::vector<double>& values,
                              const std::string& csv_path) {
  if (values.empty()) throw Error("diagnose_powerlaw: empty input");
  write_rank_frequency_csv(values, csv_path);
  return rank_frequency_fit(values);
}

void run_pipeline(const PipelineConfig& cfg, Stage from, std::ostream* log) {
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::remove(dir / artifact::kFailedMarker, ec);

  Manifest manifest(cfg);
  auto fail = [&](Stage stage, const std::string& what) {
    std::ofstream marker(dir / artifact::kFailedMarker);
    marker << stage_name(stage) << ": " << what << '\n';
    throw StageFailure(stage, what);
  };

  Graph target;
  IngestReport target_report;
  try {
    target = load_edge_list(cfg.target_edges, cfg.directed, &target_report);
  } catch (const Error& e) {
    fail(from, e.what());
  }
  if (log)
    *log << "[load] target: " << target.node_count() << " nodes, "
         << target_report.summary() << std::endl;

  Graph source;
  const bool need_source = !cfg.skip_transfer;
  if (need_source) {
    IngestReport source_report;
    try {
      source = load_edge_list(cfg.source_edges, cfg.directed, &source_report);
    } catch (const Error& e) {
      fail(from, e.what());
    }
    if (log)
      *log << "[load] source: " << source.node_count() << " nodes, "
           << source_report.summary() << std::endl;
  }

  // Per-stage seeds derive from the global seed so later stages re-run
  // identically regardless of where the run started.
  WalkParams source_walk = cfg.source_walk;
  source_walk.seed = derive_seed(cfg.seed, 0x50);
  WalkParams target_walk = cfg.target_walk;
  target_walk.seed = derive_seed(cfg.seed, 0x7a);

  WalkSet source_walks;
  SuperGraph sg;
  Graph walk_target = target;

  if (!cfg.skip_transfer) {
    // source_walks
    if (from <= Stage::SourceWalks) {
      StageTimer timer(log, "source_walks");
      try {
        source_walks = generate_walk_set(source, source_walk, cfg.threads);
        save_walks(source_walks, source, (dir / artifact::kSourceWalks).string());
      } catch (const Error& e) {
        fail(Stage::SourceWalks, e.what());
      }
      std::ostringstream p;
      p << "p=" << source_walk.p << " q=" << source_walk.q
        << " l=" << source_walk.length << " k=" << source_walk.walks_per_node;
      manifest.add_stage("source_walks", p.str(), timer.stop());
    } else {
      try {
        source_walks =
            load_walks((dir / artifact::kSourceWalks).string(), source);
      } catch (const Error& e) {
        fail(Stage::SourceWalks, std::string("resume: ") + e.what());
      }
    }

    // coarsen
    std::size_t max_super = cfg.max_super_size;
    if (max_super == 0)
      max_super = (source.node_count() + target.node_count() - 1) /
                  std::max<std::size_t>(1, target.node_count());
    if (from <= Stage::Coarsen) {
      StageTimer timer(log, "coarsen");
      try {
        sg = coarsen(source, cfg.coarsen_method, max_super,
                     derive_seed(cfg.seed, 0xc0));
        save_supergraph(sg, source, (dir / artifact::kSuperGraph).string());
      } catch (const Error& e) {
        fail(Stage::Coarsen, e.what());
      }
      std::ostringstream p;
      p << "method=" << (cfg.coarsen_method == CoarsenMethod::LabelPropagation
                             ? "label_propagation"
                             : "degree_bins")
        << " max_super_size=" << max_super;
      manifest.add_stage("coarsen", p.str(), timer.stop());
      if (log)
        *log << "[coarsen] " << sg.super_count() << " super-nodes" << std::endl;
    } else {
      try {
        sg = load_supergraph((dir / artifact::kSuperGraph).string(), source);
      } catch (const Error& e) {
        fail(Stage::Coarsen, std::string("resume: ") + e.what());
      }
    }

    // transfer
    if (from <= Stage::Transfer) {
      StageTimer timer(log, "transfer");
      try {
        NodeMapping mapping =
            map_all_nodes(target, sg, cfg.map_mode, cfg.degree_semantics);
        const double beta =
            cfg.transfer.beta_override
                ? *cfg.transfer.beta_override
                : compute_beta(target.node_count(), source.node_count());
        PairWeights weights(source, sg, source_walks,
                            cfg.transfer.distance_cap);
        walk_target = reweight_target(target, mapping, weights, beta,
                                      cfg.transfer, &sg, cfg.threads);
        save_edge_list(walk_target,
                       (dir / artifact::kReweightedTarget).string());
        std::ostringstream p;
        p << "beta=" << beta << " distance_cap=" << cfg.transfer.distance_cap
          << " virtual_weight=" << cfg.transfer.virtual_weight;
        manifest.add_stage("transfer", p.str(), timer.stop());
      } catch (const Error& e) {
        fail(Stage::Transfer, e.what());
      }
    } else {
      try {
        walk_target = load_edge_list(
            (dir / artifact::kReweightedTarget).string(), cfg.directed);
      } catch (const Error& e) {
        fail(Stage::Transfer, std::string("resume: ") + e.what());
      }
    }
  }

  // target_walks
  WalkSet target_walks;
  if (from <= Stage::TargetWalks) {
    StageTimer timer(log, "target_walks");
    try {
      target_walks = generate_walk_set(walk_target, target_walk, cfg.threads);
      save_walks(target_walks, walk_target,
                 (dir / artifact::kTargetWalks).string());
    } catch (const Error& e) {
      fail(Stage::TargetWalks, e.what());
    }
    std::ostringstream p;
    p << "p=" << target_walk.p << " q=" << target_walk.q
      << " l=" << target_walk.length << " k=" << target_walk.walks_per_node
      << (cfg.skip_transfer ? " (bottom layer only)" : "");
    manifest.add_stage("target_walks", p.str(), timer.stop());
  } else {
    try {
      target_walks =
          load_walks((dir / artifact::kTargetWalks).string(), target);
    } catch (const Error& e) {
      fail(Stage::TargetWalks, std::string("resume: ") + e.what());
    }
  }

  // embed
  EmbeddingMatrix emb;
  if (from <= Stage::Embed) {
    StageTimer timer(log, "embed");
    try {
      TrainConfig tc = cfg.embed;
      tc.seed = derive_seed(cfg.seed, 0xe0);
      tc.threads = cfg.threads;
      emb = train(target_walks, target.node_count(), tc);
      export_embeddings(emb, target, (dir / artifact::kEmbeddings).string());
    } catch (const Error& e) {
      fail(Stage::Embed, e.what());
    }
    std::ostringstream p;
    p << "dim=" << cfg.embed.dim << " window=" << cfg.embed.window
      << " epochs=" << cfg.embed.epochs << " mode="
      << (cfg.embed.mode == TrainMode::ExactSoftmax ? "exact_softmax"
                                                    : "negative_sampling")
      << " negatives=" << cfg.embed.negatives;
    manifest.add_stage("embed", p.str(), timer.stop());
  } else {
    try {
      emb = import_embeddings((dir / artifact::kEmbeddings).string(), target);
    } catch (const Error& e) {
      fail(Stage::Embed, std::string("resume: ") + e.what());
    }
  }

  // eval
  if (cfg.eval_enabled) {
    StageTimer timer(log, "eval");
    try {
      LabelTable labels = load_labels(cfg.target_labels, target);
      ProtocolConfig pc;
      pc.fractions = cfg.fractions;
      pc.repeats = cfg.repeats;
      pc.linear = cfg.linear;
      pc.seed = derive_seed(cfg.seed, 0xea);
      pc.threads = cfg.threads;
      EvalReport report = run_protocol(emb, labels, pc);
      std::ofstream txt(dir / artifact::kEvalText);
      txt << report.to_text();
      std::ofstream json(dir / artifact::kEvalJson);
      json << report.to_json();
      if (log) *log << report.to_text();
    } catch (const Error& e) {
      fail(Stage::Eval, e.what());
    }
    std::ostringstream p;
    p << "repeats=" << cfg.repeats << " lambda=" << cfg.linear.lambda;
    manifest.add_stage("eval", p.str(), timer.stop());
  }

  if (!cfg.skip_transfer) {
    manifest.add_artifact(cfg.output_dir, artifact::kSourceWalks);
    manifest.add_artifact(cfg.output_dir, artifact::kSuperGraph);
    manifest.add_artifact(cfg.output_dir, artifact::kReweightedTarget);
  }
  manifest.add_artifact(cfg.output_dir, artifact::kTargetWalks);
  manifest.add_artifact(cfg.output_dir, artifact::kEmbeddings);
  if (cfg.eval_enabled) {
    manifest.add_artifact(cfg.output_dir, artifact::kEvalText);
    manifest.add_artifact(cfg.output_dir, artifact::kEvalJson);
  }
  manifest.write(cfg.output_dir, cfg);
}

}  // namespace ftlsin
