#include "ftlsin/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace ftlsin {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

struct Parser {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::vector<std::string>* errors;

  bool has(const std::string& sec, const std::string& key) const {
    auto it = sections.find(sec);
    return it != sections.end() && it->second.count(key) > 0;
  }
  std::string raw(const std::string& sec, const std::string& key) const {
    return sections.at(sec).at(key);
  }
  void error(const std::string& sec, const std::string& key,
             const std::string& msg) const {
    errors->push_back("[" + sec + "] " + key + ": " + msg);
  }

  void get_string(const std::string& sec, const std::string& key,
                  std::string& out) const {
    if (has(sec, key)) out = raw(sec, key);
  }
  void get_double(const std::string& sec, const std::string& key, double& out,
                  double lo, double hi, bool lo_open = false) const {
    if (!has(sec, key)) return;
    try {
      std::size_t pos = 0;
      double v = std::stod(raw(sec, key), &pos);
      if (pos != raw(sec, key).size()) throw std::invalid_argument("trailing");
      if (v < lo || v > hi || (lo_open && v <= lo)) {
        error(sec, key, "value " + raw(sec, key) + " out of range");
        return;
      }
      out = v;
    } catch (const std::exception&) {
      error(sec, key, "not a number: " + raw(sec, key));
    }
  }
  void get_int(const std::string& sec, const std::string& key, int& out,
               int lo, int hi) const {
    if (!has(sec, key)) return;
    try {
      std::size_t pos = 0;
      long v = std::stol(raw(sec, key), &pos);
      if (pos != raw(sec, key).size()) throw std::invalid_argument("trailing");
      if (v < lo || v > hi) {
        error(sec, key, "value " + raw(sec, key) + " out of range");
        return;
      }
      out = static_cast<int>(v);
    } catch (const std::exception&) {
      error(sec, key, "not an integer: " + raw(sec, key));
    }
  }
  void get_size(const std::string& sec, const std::string& key,
                std::size_t& out) const {
    if (!has(sec, key)) return;
    try {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(raw(sec, key), &pos);
      if (pos != raw(sec, key).size()) throw std::invalid_argument("trailing");
      out = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      error(sec, key, "not a non-negative integer: " + raw(sec, key));
    }
  }
  void get_u64(const std::string& sec, const std::string& key,
               std::uint64_t& out) const {
    std::size_t tmp = out;
    get_size(sec, key, tmp);
    out = tmp;
  }
  void get_bool(const std::string& sec, const std::string& key,
                bool& out) const {
    if (!has(sec, key)) return;
    const std::string& v = raw(sec, key);
    if (v == "true" || v == "1")
      out = true;
    else if (v == "false" || v == "0")
      out = false;
    else
      error(sec, key, "expected true/false: " + v);
  }
};

const char* method_name(CoarsenMethod m) {
  return m == CoarsenMethod::LabelPropagation ? "label_propagation"
                                              : "degree_bins";
}
const char* mode_name(MapMode m) {
  return m == MapMode::Exact ? "exact" : "nearest";
}
const char* semantics_name(SuperDegreeSemantics s) {
  return s == SuperDegreeSemantics::DistinctNeighbors ? "super" : "boundary";
}
const char* train_mode_name(TrainMode m) {
  return m == TrainMode::ExactSoftmax ? "exact_softmax" : "negative_sampling";
}

void parse_walk(const Parser& p, const std::string& sec, WalkParams& w) {
  p.get_double(sec, "p", w.p, 0.0, 1e18, /*lo_open=*/true);
  p.get_double(sec, "q", w.q, 0.0, 1e18, /*lo_open=*/true);
  p.get_int(sec, "length", w.length, 1, 1 << 30);
  p.get_int(sec, "num_walks", w.walks_per_node, 1, 1 << 30);
  if (p.has(sec, "p") && !std::isnan(w.p) && w.p <= 0)
    p.error(sec, "p", "p must be positive");
}

}  // namespace

ConfigResult parse_config_text(const std::string& text) {
  ConfigResult res;
  Parser parser;
  parser.errors = &res.errors;

  static const std::map<std::string, std::vector<std::string>> kKnown = {
      {"paths", {"source_edges", "target_edges", "target_labels", "output_dir"}},
      {"run", {"seed", "threads", "directed", "skip_transfer"}},
      {"source_walk", {"p", "q", "length", "num_walks"}},
      {"target_walk", {"p", "q", "length", "num_walks"}},
      {"coarsen", {"method", "max_super_size"}},
      {"transfer",
       {"map_mode", "degree_semantics", "virtual_weight", "distance_cap",
        "beta_override", "per_super_beta"}},
      {"embed",
       {"dim", "window", "epochs", "mode", "negatives", "lr", "lr_final",
        "tied"}},
      {"eval", {"enabled", "fractions", "repeats", "lambda", "epochs"}},
  };

  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        res.errors.push_back("line " + std::to_string(lineno) +
                             ": unterminated section header");
        continue;
      }
      section = line.substr(1, line.size() - 2);
      if (!kKnown.count(section))
        res.errors.push_back("line " + std::to_string(lineno) +
                             ": unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      res.errors.push_back("line " + std::to_string(lineno) +
                           ": expected key=value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      res.errors.push_back("line " + std::to_string(lineno) +
                           ": key outside any section");
      continue;
    }
    auto known = kKnown.find(section);
    if (known != kKnown.end() &&
        std::find(known->second.begin(), known->second.end(), key) ==
            known->second.end())
      res.errors.push_back("line " + std::to_string(lineno) + ": unknown key " +
                           key + " in [" + section + "]");
    parser.sections[section][key] = value;
  }

  PipelineConfig& cfg = res.config;
  parser.get_string("paths", "source_edges", cfg.source_edges);
  parser.get_string("paths", "target_edges", cfg.target_edges);
  parser.get_string("paths", "target_labels", cfg.target_labels);
  parser.get_string("paths", "output_dir", cfg.output_dir);

  parser.get_u64("run", "seed", cfg.seed);
  parser.get_int("run", "threads", cfg.threads, 1, 4096);
  parser.get_bool("run", "directed", cfg.directed);
  parser.get_bool("run", "skip_transfer", cfg.skip_transfer);

  parse_walk(parser, "source_walk", cfg.source_walk);
  parse_walk(parser, "target_walk", cfg.target_walk);

  if (parser.has("coarsen", "method")) {
    const std::string m = parser.raw("coarsen", "method");
    if (m == "label_propagation")
      cfg.coarsen_method = CoarsenMethod::LabelPropagation;
    else if (m == "degree_bins")
      cfg.coarsen_method = CoarsenMethod::DegreeBins;
    else
      parser.error("coarsen", "method", "unknown method " + m);
  }
  parser.get_size("coarsen", "max_super_size", cfg.max_super_size);

  if (parser.has("transfer", "map_mode")) {
    const std::string m = parser.raw("transfer", "map_mode");
    if (m == "exact")
      cfg.map_mode = MapMode::Exact;
    else if (m == "nearest")
      cfg.map_mode = MapMode::Nearest;
    else
      parser.error("transfer", "map_mode", "unknown mode " + m);
  }
  if (parser.has("transfer", "degree_semantics")) {
    const std::string s = parser.raw("transfer", "degree_semantics");
    if (s == "super")
      cfg.degree_semantics = SuperDegreeSemantics::DistinctNeighbors;
    else if (s == "boundary")
      cfg.degree_semantics = SuperDegreeSemantics::BoundaryEdges;
    else
      parser.error("transfer", "degree_semantics", "unknown value " + s);
  }
  parser.get_double("transfer", "virtual_weight", cfg.transfer.virtual_weight,
                    0.0, 1e18);
  parser.get_int("transfer", "distance_cap", cfg.transfer.distance_cap, 1,
                 1 << 20);
  if (parser.has("transfer", "beta_override") &&
      !parser.raw("transfer", "beta_override").empty()) {
    double b = -1;
    parser.get_double("transfer", "beta_override", b, 0.0, 1.0);
    if (b >= 0) cfg.transfer.beta_override = b;
  }
  parser.get_bool("transfer", "per_super_beta", cfg.transfer.per_super_beta);

  parser.get_size("embed", "dim", cfg.embed.dim);
  parser.get_int("embed", "window", cfg.embed.window, 1, 1 << 20);
  parser.get_int("embed", "epochs", cfg.embed.epochs, 1, 1 << 20);
  if (parser.has("embed", "mode")) {
    const std::string m = parser.raw("embed", "mode");
    if (m == "exact_softmax")
      cfg.embed.mode = TrainMode::ExactSoftmax;
    else if (m == "negative_sampling")
      cfg.embed.mode = TrainMode::NegativeSampling;
    else
      parser.error("embed", "mode", "unknown mode " + m);
  }
  parser.get_int("embed", "negatives", cfg.embed.negatives, 1, 1 << 20);
  parser.get_double("embed", "lr", cfg.embed.lr_initial, 0.0, 1e9, true);
  parser.get_double("embed", "lr_final", cfg.embed.lr_final, 0.0, 1e9, true);
  parser.get_bool("embed", "tied", cfg.embed.tied);

  parser.get_bool("eval", "enabled", cfg.eval_enabled);
  if (parser.has("eval", "fractions")) {
    cfg.fractions.clear();
    std::istringstream fs(parser.raw("eval", "fractions"));
    std::string tok;
    while (std::getline(fs, tok, ',')) {
      try {
        double f = std::stod(trim(tok));
        if (f <= 0 || f >= 1) throw std::out_of_range("range");
        cfg.fractions.push_back(f);
      } catch (const std::exception&) {
        parser.error("eval", "fractions", "bad fraction \"" + tok + "\"");
      }
    }
    if (cfg.fractions.empty())
      parser.error("eval", "fractions", "no valid fractions");
  }
  parser.get_int("eval", "repeats", cfg.repeats, 1, 1 << 20);
  parser.get_double("eval", "lambda", cfg.linear.lambda, 0.0, 1e9);
  parser.get_int("eval", "epochs", cfg.linear.epochs, 1, 1 << 20);

  // Cross-field checks.
  if (cfg.embed.dim == 0)
    res.errors.push_back("[embed] dim: must be positive");
  if (cfg.embed.lr_final > cfg.embed.lr_initial)
    res.errors.push_back("[embed] lr_final: must not exceed lr");
  if (cfg.source_walk.p <= 0) res.errors.push_back("[source_walk] p must be positive");
  if (cfg.source_walk.q <= 0) res.errors.push_back("[source_walk] q must be positive");
  if (cfg.target_walk.p <= 0) res.errors.push_back("[target_walk] p must be positive");
  if (cfg.target_walk.q <= 0) res.errors.push_back("[target_walk] q must be positive");
  if (cfg.target_edges.empty())
    res.errors.push_back("[paths] target_edges: required");
  else if (!std::filesystem::exists(cfg.target_edges))
    res.errors.push_back("[paths] target_edges: file not found: " +
                         cfg.target_edges);
  if (!cfg.skip_transfer) {
    if (cfg.source_edges.empty())
      res.errors.push_back(
          "[paths] source_edges: required unless skip_transfer is set");
    else if (!std::filesystem::exists(cfg.source_edges))
      res.errors.push_back("[paths] source_edges: file not found: " +
                           cfg.source_edges);
  }
  if (cfg.eval_enabled) {
    if (cfg.target_labels.empty())
      res.errors.push_back(
          "[paths] target_labels: required when eval is enabled");
    else if (!std::filesystem::exists(cfg.target_labels))
      res.errors.push_back("[paths] target_labels: file not found: " +
                           cfg.target_labels);
  }
  // Walk seeds follow the global seed; per-stage derivation happens in the
  // pipeline, so config-level walk seeds mirror the run seed.
  res.config.source_walk.seed = cfg.seed;
  res.config.target_walk.seed = cfg.seed;
  res.config.embed.seed = cfg.seed;
  res.config.embed.threads = cfg.threads;
  res.config.linear.seed = cfg.seed;
  return res;
}

ConfigResult validate_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigResult res;
    res.errors.push_back("cannot open config file: " + path);
    return res;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string canonical_config(const PipelineConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "[paths]\n";
  os << "source_edges=" << cfg.source_edges << '\n';
  os << "target_edges=" << cfg.target_edges << '\n';
  os << "target_labels=" << cfg.target_labels << '\n';
  os << "output_dir=" << cfg.output_dir << '\n';
  os << "[run]\n";
  os << "seed=" << cfg.seed << '\n';
  os << "threads=" << cfg.threads << '\n';
  os << "directed=" << (cfg.directed ? "true" : "false") << '\n';
  os << "skip_transfer=" << (cfg.skip_transfer ? "true" : "false") << '\n';
  auto walk = [&](const char* sec, const WalkParams& w) {
    os << '[' << sec << "]\n";
    os << "p=" << w.p << '\n';
    os << "q=" << w.q << '\n';
    os << "length=" << w.length << '\n';
    os << "num_walks=" << w.walks_per_node << '\n';
  };
  walk("source_walk", cfg.source_walk);
  walk("target_walk", cfg.target_walk);
  os << "[coarsen]\n";
  os << "method=" << method_name(cfg.coarsen_method) << '\n';
  os << "max_super_size=" << cfg.max_super_size << '\n';
  os << "[transfer]\n";
  os << "map_mode=" << mode_name(cfg.map_mode) << '\n';
  os << "degree_semantics=" << semantics_name(cfg.degree_semantics) << '\n';
  os << "virtual_weight=" << cfg.transfer.virtual_weight << '\n';
  os << "distance_cap=" << cfg.transfer.distance_cap << '\n';
  os << "beta_override=";
  if (cfg.transfer.beta_override) os << *cfg.transfer.beta_override;
  os << '\n';
  os << "per_super_beta=" << (cfg.transfer.per_super_beta ? "true" : "false")
     << '\n';
  os << "[embed]\n";
  os << "dim=" << cfg.embed.dim << '\n';
  os << "window=" << cfg.embed.window << '\n';
  os << "epochs=" << cfg.embed.epochs << '\n';
  os << "mode=" << train_mode_name(cfg.embed.mode) << '\n';
  os << "negatives=" << cfg.embed.negatives << '\n';
  os << "lr=" << cfg.embed.lr_initial << '\n';
  os << "lr_final=" << cfg.embed.lr_final << '\n';
  os << "tied=" << (cfg.embed.tied ? "true" : "false") << '\n';
  os << "[eval]\n";
  os << "enabled=" << (cfg.eval_enabled ? "true" : "false") << '\n';
  os << "fractions=";
  for (std::size_t i = 0; i < cfg.fractions.size(); ++i)
    os << (i ? "," : "") << cfg.fractions[i];
  os << '\n';
  os << "repeats=" << cfg.repeats << '\n';
  os << "lambda=" << cfg.linear.lambda << '\n';
  os << "epochs=" << cfg.linear.epochs << '\n';
  return os.str();
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot hash missing file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_hash(ss.str());
}

}  // namespace ftlsin
