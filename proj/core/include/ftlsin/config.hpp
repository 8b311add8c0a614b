#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftlsin/embedding.hpp"
#include "ftlsin/eval.hpp"
#include "ftlsin/transfer.hpp"

namespace ftlsin {

// Full pipeline configuration. On-disk format is a sectioned key=value text
// file; see parse_config / canonical_config for the exact grammar.
struct PipelineConfig {
  // [paths]
  std::string source_edges;
  std::string target_edges;
  std::string target_labels;
  std::string output_dir = "out";
  // [run]
  std::uint64_t seed = 1;
  int threads = 1;
  bool directed = false;
  bool skip_transfer = false;
  // [source_walk] / [target_walk]
  WalkParams source_walk;
  WalkParams target_walk;
  // [coarsen]
  CoarsenMethod coarsen_method = CoarsenMethod::LabelPropagation;
  std::size_t max_super_size = 0;  // 0: ceil(|V^s| / |V^t|)
  // [transfer]
  MapMode map_mode = MapMode::Nearest;
  SuperDegreeSemantics degree_semantics = SuperDegreeSemantics::DistinctNeighbors;
  TransferParams transfer;
  // [embed]
  TrainConfig embed;
  // [eval]
  bool eval_enabled = true;
  std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int repeats = 10;
  LinearTrainConfig linear;
};

struct ConfigResult {
  PipelineConfig config;
  std::vector<std::string> errors;  // empty iff the config is valid
  bool ok() const { return errors.empty(); }
};

// Parses and validates in one pass; all problems are collected, not
// fail-fast. Path existence is checked for files the run will read.
ConfigResult parse_config_text(const std::string& text);
ConfigResult validate_config(const std::string& path);

// Canonical serialization: fixed section and key order, one key=value per
// line. validate(canonical(cfg)) is the identity.
std::string canonical_config(const PipelineConfig& cfg);

// FNV-1a 64-bit over bytes; used for config and artifact hashes.
std::uint64_t fnv1a_hash(const std::string& bytes);
std::uint64_t hash_file(const std::string& path);

}  // namespace ftlsin
