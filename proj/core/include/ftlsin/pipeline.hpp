#pragma once

#include <string>

#include "ftlsin/config.hpp"
#include "ftlsin/powerlaw.hpp"

namespace ftlsin {

// Pipeline stages in execution order. Resuming from a later stage reads the
// earlier artifacts back from the output directory.
enum class Stage {
  SourceWalks,
  Coarsen,
  Transfer,
  TargetWalks,
  Embed,
  Eval,
};

const char* stage_name(Stage s);
bool parse_stage(const std::string& name, Stage& out);

struct StageFailure : Error {
  StageFailure(Stage stage, const std::string& what)
      : Error(std::string(stage_name(stage)) + ": " + what), stage(stage) {}
  Stage stage;
};

// Artifact file names inside the output directory.
namespace artifact {
inline constexpr const char* kSourceWalks = "source_walks.txt";
inline constexpr const char* kSuperGraph = "supergraph.txt";
inline constexpr const char* kReweightedTarget = "target_reweighted.edges";
inline constexpr const char* kTargetWalks = "target_walks.txt";
inline constexpr const char* kEmbeddings = "embeddings.txt";
inline constexpr const char* kEvalText = "eval_report.txt";
inline constexpr const char* kEvalJson = "eval_report.json";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kFailedMarker = "FAILED";
}  // namespace artifact

// Runs all stages from `from` onward, writes every artifact plus a manifest
// with per-stage parameters, the seed, and content hashes. On a stage
// failure, partial artifacts are kept and a FAILED marker names the stage.
void run_pipeline(const PipelineConfig& cfg, Stage from = Stage::SourceWalks,
                  std::ostream* log = nullptr);

// Rank-frequency power-law diagnostic over per-node values (degrees or walk
// occurrence counts); writes the CSV and returns the fit.
PowerLawFit diagnose_powerlaw(const std::vector<double>& values,
                              const std::string& csv_path);

}  // namespace ftlsin
