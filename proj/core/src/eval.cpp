#include "ftlsin/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "ftlsin/rng.hpp"

namespace ftlsin {

Split split(const LabelTable& labels, double fraction, std::uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0)
    throw Error("split fraction must be in (0, 1)");
  std::vector<NodeId> nodes = labels.labeled_nodes();
  const std::size_t n = nodes.size();
  const std::size_t train_n =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (train_n == 0 || train_n == n)
    throw Error("split fraction yields an empty train or test set");
  auto rng = make_rng(seed);
  for (std::size_t i = n; i > 1; --i)
    std::swap(nodes[i - 1], nodes[uniform_index(rng, i)]);
  Split s;
  s.train.assign(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(train_n));
  s.test.assign(nodes.begin() + static_cast<std::ptrdiff_t>(train_n), nodes.end());
  return s;
}

double LinearModel::decision(int cls, std::span<const double> x) const {
  if (!trained[static_cast<std::size_t>(cls)])
    return -std::numeric_limits<double>::infinity();
  const double* w = weights.data() + static_cast<std::size_t>(cls) * dim;
  double s = bias[static_cast<std::size_t>(cls)];
  for (std::size_t i = 0; i < dim; ++i) s += w[i] * x[i];
  return s;
}

int LinearModel::predict(std::span<const double> x) const {
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < classes; ++c) {
    double s = decision(static_cast<int>(c), x);
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(c);
    }
  }
  return best;
}

LinearModel train_linear_ovr(const EmbeddingMatrix& emb,
                             const LabelTable& labels,
                             std::span<const NodeId> train_ids,
                             const LinearTrainConfig& cfg) {
  const std::size_t d = emb.dim;
  const std::size_t classes = static_cast<std::size_t>(labels.class_count);
  LinearModel model;
  model.classes = classes;
  model.dim = d;
  model.weights.assign(classes * d, 0.0);
  model.bias.assign(classes, 0.0);
  model.trained.assign(classes, 0);

  for (NodeId v : train_ids) {
    int c = labels.class_of[static_cast<std::size_t>(v)];
    if (c < 0) throw Error("unlabeled node in training split");
    model.trained[static_cast<std::size_t>(c)] = 1;
  }

  std::vector<NodeId> order(train_ids.begin(), train_ids.end());
  auto rng = make_rng(derive_seed(cfg.seed, 0x11ea));
  std::size_t step = 0;
  const std::size_t total =
      order.size() * static_cast<std::size_t>(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[uniform_index(rng, i)]);
    for (NodeId v : order) {
      const double lr =
          1.0 / (1.0 + 10.0 * static_cast<double>(step++) /
                           static_cast<double>(std::max<std::size_t>(1, total)));
      auto x = emb.row(v);
      const int truth = labels.class_of[static_cast<std::size_t>(v)];
      for (std::size_t c = 0; c < classes; ++c) {
        if (!model.trained[c]) continue;
        const double y = (static_cast<int>(c) == truth) ? 1.0 : -1.0;
        double* w = model.weights.data() + c * d;
        double margin = model.bias[c];
        for (std::size_t k = 0; k < d; ++k) margin += w[k] * x[k];
        margin *= y;
        // L2 shrink plus hinge subgradient.
        const double shrink = 1.0 - lr * cfg.lambda;
        for (std::size_t k = 0; k < d; ++k) w[k] *= shrink;
        if (margin < 1.0) {
          for (std::size_t k = 0; k < d; ++k) w[k] += lr * y * x[k];
          model.bias[c] += lr * y;
        }
      }
    }
  }
  return model;
}

std::pair<double, double> f1_scores(std::span<const int> predictions,
                                    std::span<const int> truth) {
  if (predictions.size() != truth.size())
    throw Error("prediction/truth length mismatch");
  if (predictions.empty()) throw Error("f1_scores requires at least one sample");
  int max_class = 0;
  for (int c : predictions) max_class = std::max(max_class, c);
  for (int c : truth) max_class = std::max(max_class, c);
  const std::size_t k = static_cast<std::size_t>(max_class) + 1;
  std::vector<std::size_t> tp(k, 0), fp(k, 0), fn(k, 0);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto p = static_cast<std::size_t>(predictions[i]);
    const auto t = static_cast<std::size_t>(truth[i]);
    if (p == t) {
      ++tp[p];
    } else {
      ++fp[p];
      ++fn[t];
    }
  }
  std::size_t tp_all = 0, fp_all = 0, fn_all = 0;
  double macro = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < k; ++c) {
    tp_all += tp[c];
    fp_all += fp[c];
    fn_all += fn[c];
    if (tp[c] + fp[c] + fn[c] == 0) continue;  // class absent entirely
    ++present;
    const double denom = 2.0 * static_cast<double>(tp[c]) +
                         static_cast<double>(fp[c]) +
                         static_cast<double>(fn[c]);
    macro += denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp[c]) / denom;
  }
  const double micro_denom = 2.0 * static_cast<double>(tp_all) +
                             static_cast<double>(fp_all) +
                             static_cast<double>(fn_all);
  const double micro =
      micro_denom == 0.0 ? 0.0
                         : 2.0 * static_cast<double>(tp_all) / micro_denom;
  return {micro, present == 0 ? 0.0 : macro / static_cast<double>(present)};
}

namespace {

void population_stats(std::span<const double> xs, double& mean, double& var) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
}

}  // namespace

std::string EvalReport::to_text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << std::setw(18) << "Statistic";
  for (double f : fractions)
    os << std::setw(9) << (std::to_string(static_cast<int>(std::llround(f * 100))) + "%");
  os << '\n';
  auto row = [&](const std::string& name, const std::vector<double>& vals) {
    os << std::setw(18) << name;
    for (double v : vals) os << std::setw(9) << v;
    os << '\n';
  };
  row("Micro-F1 mean", micro_mean);
  row("Micro-F1 variance", micro_var);
  row("Macro-F1 mean", macro_mean);
  row("Macro-F1 variance", macro_var);
  for (const auto& note : notes) os << "# " << note << '\n';
  os << "# variance is population variance over " << repeats << " repeats\n";
  return os.str();
}

std::string EvalReport::to_json() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{\n  \"variance\": \"population\",\n  \"repeats\": " << repeats
     << ",\n  \"cells\": [\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    os << "    {\"fraction\": " << c.fraction << ", \"repeat\": " << c.repeat
       << ", \"micro_f1\": " << c.micro_f1 << ", \"macro_f1\": " << c.macro_f1
       << '}' << (i + 1 < cells.size() ? "," : "") << '\n';
  }
  os << "  ],\n  \"aggregates\": [\n";
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    os << "    {\"fraction\": " << fractions[i]
       << ", \"micro_mean\": " << micro_mean[i]
       << ", \"micro_var\": " << micro_var[i]
       << ", \"macro_mean\": " << macro_mean[i]
       << ", \"macro_var\": " << macro_var[i] << '}'
       << (i + 1 < fractions.size() ? "," : "") << '\n';
  }
  os << "  ]\n}\n";
  return os.str();
}

EvalReport run_protocol(const EmbeddingMatrix& emb, const LabelTable& labels,
                        const ProtocolConfig& cfg) {
  if (emb.nodes != labels.class_of.size())
    throw Error("embeddings do not cover the labeled graph");
  if (cfg.repeats < 1) throw Error("repeats must be >= 1");

  EvalReport report;
  report.fractions = cfg.fractions;
  report.repeats = cfg.repeats;
  report.cells.resize(cfg.fractions.size() *
                      static_cast<std::size_t>(cfg.repeats));

  bool missing_class = false;
  auto run_cell = [&](std::size_t fi, int rep) {
    const double fraction = cfg.fractions[fi];
    Split s = split(labels, fraction,
                    derive_seed(cfg.seed, fi, static_cast<std::uint64_t>(rep)));
    LinearTrainConfig ltc = cfg.linear;
    ltc.seed = derive_seed(cfg.seed, 0xc1a5 + fi,
                           static_cast<std::uint64_t>(rep));
    LinearModel model = train_linear_ovr(emb, labels, s.train, ltc);
    for (char t : model.trained)
      if (!t) missing_class = true;
    std::vector<int> pred, truth;
    pred.reserve(s.test.size());
    truth.reserve(s.test.size());
    for (NodeId v : s.test) {
      pred.push_back(model.predict(emb.row(v)));
      truth.push_back(labels.class_of[static_cast<std::size_t>(v)]);
    }
    auto [micro, macro] = f1_scores(pred, truth);
    auto& cell =
        report.cells[fi * static_cast<std::size_t>(cfg.repeats) +
                     static_cast<std::size_t>(rep)];
    cell = {fraction, rep + 1, micro, macro};
  };

  std::vector<std::pair<std::size_t, int>> tasks;
  for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi)
    for (int rep = 0; rep < cfg.repeats; ++rep) tasks.emplace_back(fi, rep);

  const std::size_t nthreads =
      std::max<std::size_t>(1, static_cast<std::size_t>(cfg.threads));
  if (nthreads == 1) {
    for (const auto& [fi, rep] : tasks) run_cell(fi, rep);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < tasks.size(); i += nthreads)
          run_cell(tasks[i].first, tasks[i].second);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
    std::vector<double> micro, macro;
    for (int rep = 0; rep < cfg.repeats; ++rep) {
      const auto& cell =
          report.cells[fi * static_cast<std::size_t>(cfg.repeats) +
                       static_cast<std::size_t>(rep)];
      micro.push_back(cell.micro_f1);
      macro.push_back(cell.macro_f1);
    }
    double m, v;
    population_stats(micro, m, v);
    report.micro_mean.push_back(m);
    report.micro_var.push_back(v);
    population_stats(macro, m, v);
    report.macro_mean.push_back(m);
    report.macro_var.push_back(v);
  }
  if (missing_class)
    report.notes.push_back(
        "at least one class was absent from a training split and never predicted");
  return report;
}

}  // namespace ftlsin
