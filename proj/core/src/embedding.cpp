#include "ftlsin/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "ftlsin/rng.hpp"

namespace ftlsin {

std::vector<ContextPair> context_pairs(std::span<const NodeId> walk,
                                       int window) {
  if (window < 1) throw Error("window must be >= 1");
  std::vector<ContextPair> pairs;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(walk.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - window);
    const std::ptrdiff_t hi = std::min(n - 1, i + window);
    for (std::ptrdiff_t j = lo; j <= hi; ++j)
      if (j != i) pairs.emplace_back(walk[static_cast<std::size_t>(i)],
                                     walk[static_cast<std::size_t>(j)]);
  }
  return pairs;
}

std::vector<ContextPair> all_context_pairs(const WalkSet& walks, int window) {
  std::vector<ContextPair> pairs;
  for (const auto& walk : walks.walks) {
    auto wp = context_pairs(walk, window);
    pairs.insert(pairs.end(), wp.begin(), wp.end());
  }
  return pairs;
}

namespace {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Scores ctx(v)·in(u) for all v, max-shifted exp, returns (probs, logZ+max).
std::pair<std::vector<double>, double> softmax_row(const EmbeddingMatrix& emb,
                                                   NodeId u) {
  std::vector<double> scores(emb.nodes);
  auto fu = emb.row(u);
  for (std::size_t v = 0; v < emb.nodes; ++v)
    scores[v] = dot(emb.context_row(static_cast<NodeId>(v)), fu);
  double mx = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double& s : scores) {
    s = std::exp(s - mx);
    z += s;
  }
  for (double& s : scores) s /= z;
  return {std::move(scores), std::log(z) + mx};
}

inline double sigmoid(double x) {
  if (x > 30) return 1.0;
  if (x < -30) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

double softmax_prob(const EmbeddingMatrix& emb, NodeId n, NodeId u) {
  if (static_cast<std::size_t>(n) >= emb.nodes ||
      static_cast<std::size_t>(u) >= emb.nodes || n < 0 || u < 0)
    throw Error("softmax_prob: invalid node id");
  return softmax_row(emb, u).first[static_cast<std::size_t>(n)];
}

double neighborhood_log_likelihood(const EmbeddingMatrix& emb,
                                   std::span<const ContextPair> pairs) {
  double total = 0.0;
  // Group by center so the normalizer is computed once per distinct u.
  std::vector<ContextPair> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t i = 0;
  while (i < sorted.size()) {
    NodeId u = sorted[i].first;
    auto [probs, log_z] = softmax_row(emb, u);
    (void)log_z;
    while (i < sorted.size() && sorted[i].first == u) {
      total += std::log(probs[static_cast<std::size_t>(sorted[i].second)]);
      ++i;
    }
  }
  return total;
}

std::vector<double> exact_softmax_gradient(const EmbeddingMatrix& emb,
                                           std::span<const ContextPair> pairs) {
  const std::size_t d = emb.dim;
  const std::size_t table = emb.nodes * d;
  std::vector<double> grad(emb.tied ? table : 2 * table, 0.0);
  auto grad_in = [&](NodeId v) {
    return std::span<double>(grad.data() + static_cast<std::size_t>(v) * d, d);
  };
  auto grad_ctx = [&](NodeId v) {
    std::size_t base = emb.tied ? 0 : table;
    return std::span<double>(
        grad.data() + base + static_cast<std::size_t>(v) * d, d);
  };

  for (const auto& [u, n] : pairs) {
    auto [probs, log_z] = softmax_row(emb, u);
    (void)log_z;
    auto fu = emb.row(u);
    auto gn = grad_ctx(n);
    auto cn = emb.context_row(n);
    auto gu = grad_in(u);
    for (std::size_t i = 0; i < d; ++i) {
      gn[i] += fu[i];
      gu[i] += cn[i];
    }
    for (std::size_t v = 0; v < emb.nodes; ++v) {
      double p = probs[v];
      auto cv = emb.context_row(static_cast<NodeId>(v));
      auto gv = grad_ctx(static_cast<NodeId>(v));
      for (std::size_t i = 0; i < d; ++i) {
        gv[i] -= p * fu[i];
        gu[i] -= p * cv[i];
      }
    }
  }
  return grad;
}

namespace {

// Unigram^0.75 sampler over walk frequencies, cumulative-table based.
class NoiseSampler {
 public:
  NoiseSampler(const WalkSet& walks, std::size_t node_count) {
    std::vector<double> mass(node_count, 0.0);
    for (const auto& walk : walks.walks)
      for (NodeId v : walk) mass[static_cast<std::size_t>(v)] += 1.0;
    cum_.resize(node_count);
    double total = 0.0;
    for (std::size_t v = 0; v < node_count; ++v) {
      if (mass[v] > 0) total += std::pow(mass[v], 0.75);
      cum_[v] = total;
    }
    if (total <= 0) throw Error("noise distribution is empty");
    for (double& c : cum_) c /= total;
  }

  NodeId draw(std::mt19937_64& rng) const {
    double u = uniform01(rng);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) --it;
    return static_cast<NodeId>(it - cum_.begin());
  }

 private:
  std::vector<double> cum_;
};

void sgd_exact_softmax(EmbeddingMatrix& emb,
                       std::span<const ContextPair> pairs, double lr) {
  const std::size_t d = emb.dim;
  for (const auto& [u, n] : pairs) {
    auto [probs, log_z] = softmax_row(emb, u);
    (void)log_z;
    std::vector<double> fu(emb.row(u).begin(), emb.row(u).end());
    // d/d in(u) = ctx(n) - sum_v p(v) ctx(v)
    std::vector<double> gu(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) gu[i] = emb.context_row(n)[i];
    for (std::size_t v = 0; v < emb.nodes; ++v) {
      auto cv = emb.context_row(static_cast<NodeId>(v));
      for (std::size_t i = 0; i < d; ++i) gu[i] -= probs[v] * cv[i];
    }
    for (std::size_t v = 0; v < emb.nodes; ++v) {
      auto cv = emb.context_row(static_cast<NodeId>(v));
      double coef = ((static_cast<NodeId>(v) == n) ? 1.0 : 0.0) - probs[v];
      for (std::size_t i = 0; i < d; ++i) cv[i] += lr * coef * fu[i];
    }
    auto iu = emb.row(u);
    for (std::size_t i = 0; i < d; ++i) iu[i] += lr * gu[i];
  }
}

void sgd_negative_sampling(EmbeddingMatrix& emb,
                           std::span<const ContextPair> pairs,
                           const NoiseSampler& noise, int negatives, double lr,
                           std::mt19937_64& rng) {
  const std::size_t d = emb.dim;
  std::vector<double> gu(d);
  for (const auto& [u, n] : pairs) {
    auto iu = emb.row(u);
    std::fill(gu.begin(), gu.end(), 0.0);
    for (int s = 0; s <= negatives; ++s) {
      NodeId tgt = (s == 0) ? n : noise.draw(rng);
      if (s > 0 && tgt == n) continue;
      double label = (s == 0) ? 1.0 : 0.0;
      auto ct = emb.context_row(tgt);
      double g = (label - sigmoid(dot(ct, iu)));
      for (std::size_t i = 0; i < d; ++i) {
        gu[i] += g * ct[i];
        ct[i] += lr * g * iu[i];
      }
    }
    for (std::size_t i = 0; i < d; ++i) iu[i] += lr * gu[i];
  }
}

}  // namespace

EmbeddingMatrix train(const WalkSet& walks, std::size_t node_count,
                      const TrainConfig& cfg) {
  cfg.validate();
  if (walks.walks.empty()) throw Error("cannot train on an empty walk set");

  EmbeddingMatrix emb;
  emb.nodes = node_count;
  emb.dim = cfg.dim;
  emb.tied = cfg.tied;
  emb.in.resize(node_count * cfg.dim);
  if (!cfg.tied) emb.ctx.assign(node_count * cfg.dim, 0.0);

  auto rng = make_rng(derive_seed(cfg.seed, 0xe17b));
  const double half = 0.5 / static_cast<double>(cfg.dim);
  for (double& x : emb.in) x = (uniform01(rng) * 2.0 - 1.0) * half;

  auto pairs = all_context_pairs(walks, cfg.window);
  if (pairs.empty()) return emb;  // degenerate corpus of length-1 walks

  NoiseSampler noise(walks, node_count);
  const std::size_t total_updates =
      pairs.size() * static_cast<std::size_t>(cfg.epochs);
  std::size_t done = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto shuffle_rng = make_rng(derive_seed(cfg.seed, 0x5481,
                                            static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = pairs.size(); i > 1; --i)
      std::swap(pairs[i - 1], pairs[uniform_index(shuffle_rng, i)]);

    const double frac =
        static_cast<double>(done) / static_cast<double>(total_updates);
    const double lr = cfg.lr_initial + (cfg.lr_final - cfg.lr_initial) * frac;

    if (cfg.mode == TrainMode::ExactSoftmax) {
      sgd_exact_softmax(emb, pairs, lr);
    } else if (cfg.threads <= 1) {
      auto draw_rng = make_rng(derive_seed(cfg.seed, 0x9e94,
                                           static_cast<std::uint64_t>(epoch)));
      sgd_negative_sampling(emb, pairs, noise, cfg.negatives, lr, draw_rng);
    } else {
      // Lock-free parallel updates; benign races, non-deterministic.
      std::vector<std::thread> pool;
      const std::size_t nthreads = static_cast<std::size_t>(cfg.threads);
      const std::size_t chunk = (pairs.size() + nthreads - 1) / nthreads;
      for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
          auto draw_rng = make_rng(derive_seed(
              cfg.seed, 0x9e94 + t, static_cast<std::uint64_t>(epoch)));
          std::size_t begin = t * chunk;
          std::size_t end = std::min(pairs.size(), begin + chunk);
          if (begin < end)
            sgd_negative_sampling(
                emb,
                std::span<const ContextPair>(pairs.data() + begin, end - begin),
                noise, cfg.negatives, lr, draw_rng);
        });
      }
      for (auto& th : pool) th.join();
    }
    done += pairs.size();
  }
  return emb;
}

void export_embeddings(const EmbeddingMatrix& emb, const Graph& g,
                       const std::string& path) {
  if (emb.nodes != g.node_count())
    throw Error("embedding row count does not match graph");
  std::ofstream out(path);
  if (!out) throw Error("cannot write embeddings: " + path);
  out.precision(17);
  out << emb.nodes << ' ' << emb.dim << '\n';
  for (std::size_t v = 0; v < emb.nodes; ++v) {
    out << g.external_id(static_cast<NodeId>(v));
    for (double x : emb.row(static_cast<NodeId>(v))) out << ' ' << x;
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

EmbeddingMatrix import_embeddings(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings: " + path);
  std::size_t n = 0, d = 0;
  if (!(in >> n >> d)) throw Error("bad embedding header: " + path);
  if (n != g.node_count()) throw Error("embedding row count mismatch");
  EmbeddingMatrix emb;
  emb.nodes = n;
  emb.dim = d;
  emb.in.assign(n * d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    std::string name;
    if (!(in >> name)) throw Error("truncated embedding file: " + path);
    NodeId v = g.find(name);
    if (v < 0) throw Error("embedding for unknown node \"" + name + "\"");
    for (std::size_t i = 0; i < d; ++i)
      if (!(in >> emb.in[static_cast<std::size_t>(v) * d + i]))
        throw Error("truncated embedding row: " + name);
  }
  return emb;
}

}  // namespace ftlsin
