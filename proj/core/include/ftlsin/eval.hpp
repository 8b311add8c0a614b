#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ftlsin/embedding.hpp"
#include "ftlsin/graph.hpp"

namespace ftlsin {

struct Split {
  std::vector<NodeId> train;
  std::vector<NodeId> test;
};

// Uniform random partition of the labeled nodes; |train| = round(fraction*N).
Split split(const LabelTable& labels, double fraction, std::uint64_t seed);

// One-vs-rest linear classifiers; classes absent from training data keep
// trained=false and are never predicted.
struct LinearModel {
  std::size_t classes = 0;
  std::size_t dim = 0;
  std::vector<double> weights;  // classes x dim
  std::vector<double> bias;
  std::vector<char> trained;

  double decision(int cls, std::span<const double> x) const;
  int predict(std::span<const double> x) const;
};

struct LinearTrainConfig {
  double lambda = 1e-4;
  int epochs = 100;
  std::uint64_t seed = 1;
};

// Per-class binary hinge loss with L2 regularization, trained by SGD over
// seed-shuffled samples.
LinearModel train_linear_ovr(const EmbeddingMatrix& emb,
                             const LabelTable& labels,
                             std::span<const NodeId> train_ids,
                             const LinearTrainConfig& cfg);

// (micro_f1, macro_f1). Micro pools TP/FP/FN over classes; macro is the
// unweighted mean of per-class F1, with F1 = 0 when precision + recall = 0.
std::pair<double, double> f1_scores(std::span<const int> predictions,
                                    std::span<const int> truth);

struct EvalCell {
  double fraction = 0.0;
  int repeat = 0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

struct EvalReport {
  std::vector<double> fractions;
  int repeats = 0;
  std::vector<EvalCell> cells;  // fraction-major, repeat-minor
  std::vector<double> micro_mean, micro_var;  // population variance
  std::vector<double> macro_mean, macro_var;
  std::vector<std::string> notes;  // e.g. classes absent from training

  std::string to_text() const;  // aligned table, one row block per statistic
  std::string to_json() const;
};

struct ProtocolConfig {
  std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5,
                                   0.6, 0.7, 0.8, 0.9};
  int repeats = 10;
  LinearTrainConfig linear;
  std::uint64_t seed = 1;
  int threads = 1;
};

EvalReport run_protocol(const EmbeddingMatrix& emb, const LabelTable& labels,
                        const ProtocolConfig& cfg);

}  // namespace ftlsin
