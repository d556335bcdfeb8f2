// Copyright 2026 The ucode Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command implementations behind the `ucode` binary. Kept in a header so the
// tests can drive commands in-process.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ucode/ucode.hpp"

namespace ucode::cli {

inline constexpr const char* kToolVersion = "1.0.0";

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InputError("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

inline std::string read_file(const fs::path& p) { return TextSource::file(p).read(); }

/// Graph input flags shared by train, eval and oracle.
struct DataOptions {
  std::string builtin;
  std::string edges, features, labels, cover, nodes;
  int n = 0;  // 0: infer
  int l = 0;  // 0: infer

  bool given() const { return !builtin.empty() || !edges.empty(); }

  void bind(CLI::App& app, bool builtins) {
    if (builtins) app.add_option("--builtin", builtin, "builtin graph (bowtie, triangle)");
    app.add_option("--edges", edges, "edge list, one 'u<TAB>v' per line");
    app.add_option("--features", features, "node features CSV");
    app.add_option("--labels", labels, "ground-truth labels, one per node");
    app.add_option("--cover", cover, "ground-truth cover, 'community<TAB>node' per line");
    app.add_option("--nodes", nodes, "node names, one per line");
    app.add_option("--n", n, "declared node count");
    app.add_option("--l", l, "declared feature width");
  }

  std::vector<std::string> files() const {
    std::vector<std::string> out;
    for (const auto* f : {&edges, &features, &labels, &cover, &nodes})
      if (!f->empty()) out.push_back(*f);
    return out;
  }

  Dataset load() const {
    if (!builtin.empty()) {
      if (!edges.empty()) throw InputError("--builtin and --edges are exclusive");
      auto g = builtin_graph(builtin);
      if (!g) throw InputError("unknown builtin graph '" + builtin + "'");
      std::vector<std::string> names;
      for (int i = 0; i < g->num_nodes(); ++i) names.push_back(std::to_string(i));
      return Dataset{std::move(*g), std::move(names)};
    }
    if (edges.empty()) throw InputError("an edge list is required: pass --edges or --builtin");
    DatasetBundle b;
    b.edges = TextSource::file(edges);
    auto opt = [](const std::string& p) -> std::optional<TextSource> {
      if (p.empty()) return std::nullopt;
      return TextSource::file(p);
    };
    b.features = opt(features);
    b.labels = opt(labels);
    b.cover = opt(cover);
    b.nodes = opt(nodes);
    if (n > 0) b.declared_n = n;
    if (l > 0) b.declared_l = l;
    return load_bundle(b);
  }

  ojson to_json() const {
    return {{"builtin", builtin}, {"edges", edges},   {"features", features}, {"labels", labels},
            {"cover", cover},     {"nodes", nodes},   {"n", n},               {"l", l}};
  }

  static DataOptions from_json(const nlohmann::json& j) {
    DataOptions d;
    d.builtin = j.value("builtin", "");
    d.edges = j.value("edges", "");
    d.features = j.value("features", "");
    d.labels = j.value("labels", "");
    d.cover = j.value("cover", "");
    d.nodes = j.value("nodes", "");
    d.n = j.value("n", 0);
    d.l = j.value("l", 0);
    return d;
  }
};

inline ojson input_digests(const std::vector<std::string>& files) {
  ojson out = ojson::array();
  for (const auto& f : files) out.push_back({{"path", f}, {"sha256", sha256_hex(read_file(f))}});
  return out;
}

/// Writes manifest.json next to the outputs. The manifest path itself is
/// appended to `outputs`.
inline void write_manifest(const fs::path& dir, const std::string& command, ojson config,
                           std::uint64_t seed, const std::vector<std::string>& inputs,
                           std::vector<fs::path> outputs, double seconds) {
  outputs.push_back(dir / "manifest.json");
  ojson m;
  m["tool"] = "ucode";
  m["version"] = kToolVersion;
  m["command"] = command;
  m["config"] = std::move(config);
  m["seed"] = seed;
  m["inputs"] = input_digests(inputs);
  ojson outs = ojson::array();
  for (const auto& p : outputs) outs.push_back(p.string());
  m["outputs"] = std::move(outs);
  m["wall_seconds"] = seconds;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// train ----------------------------------------------------------------------

inline const std::map<std::string, PermPolicy> kPermPolicies{
    {"resample", PermPolicy::resample_each_epoch}, {"fixed", PermPolicy::fixed_derangement}};
inline const std::map<std::string, QmScale> kQmScales{
    {"raw", QmScale::raw}, {"quarter", QmScale::paper_quarter}, {"half", QmScale::standard_half}};

template <class Map, class Value>
std::string name_of(const Map& m, Value v) {
  for (const auto& [k, x] : m)
    if (x == v) return k;
  return "";
}

struct TrainOptions {
  DataOptions data;
  TrainConfig cfg;
  std::string preset = "default";
  std::string out;
  bool overlap = false;
  bool kmeans = false;
  bool timing = false;
  std::string manifest;

  ojson to_json() const {
    return {{"data", data.to_json()},
            {"preset", preset},
            {"epochs", cfg.epochs},
            {"lr", cfg.lr},
            {"hidden", cfg.hidden},
            {"k", cfg.k},
            {"delta", cfg.delta},
            {"weight_decay", cfg.weight_decay},
            {"seed", cfg.seed},
            {"amplify", cfg.amplify},
            {"perm_policy", name_of(kPermPolicies, cfg.perm_policy)},
            {"dropout", cfg.dropout},
            {"qm_normalization", name_of(kQmScales, cfg.qm_normalization)},
            {"epsilon", cfg.epsilon},
            {"overlap", overlap},
            {"kmeans", kmeans},
            {"timing", timing}};
  }

  static TrainOptions from_json(const nlohmann::json& j) {
    TrainOptions o;
    o.data = DataOptions::from_json(j.at("data"));
    o.preset = j.at("preset").get<std::string>();
    o.cfg.epochs = j.at("epochs").get<int>();
    o.cfg.lr = j.at("lr").get<double>();
    o.cfg.hidden = j.at("hidden").get<int>();
    o.cfg.k = j.at("k").get<int>();
    o.cfg.delta = j.at("delta").get<double>();
    o.cfg.weight_decay = j.at("weight_decay").get<double>();
    o.cfg.seed = j.at("seed").get<std::uint64_t>();
    o.cfg.amplify = j.at("amplify").get<bool>();
    o.cfg.perm_policy = kPermPolicies.at(j.at("perm_policy").get<std::string>());
    o.cfg.dropout = j.at("dropout").get<double>();
    o.cfg.qm_normalization = kQmScales.at(j.at("qm_normalization").get<std::string>());
    o.cfg.epsilon = j.at("epsilon").get<double>();
    o.overlap = j.at("overlap").get<bool>();
    o.kmeans = j.at("kmeans").get<bool>();
    o.timing = j.at("timing").get<bool>();
    return o;
  }
};

inline void bind_train(CLI::App& app, TrainOptions& o) {
  o.data.bind(app, true);
  auto& c = o.cfg;
  app.add_option("--preset", o.preset, "default or overlapping (hidden 128, wd 1e-2, delta 0.85)")
      ->check(CLI::IsMember({"default", "overlapping"}));
  app.add_option("--epochs", c.epochs, "training epochs")->capture_default_str();
  app.add_option("--lr", c.lr, "Adam learning rate")->capture_default_str();
  app.add_option("--hidden", c.hidden, "hidden width")->capture_default_str();
  app.add_option("--k", c.k, "number of communities")->capture_default_str();
  app.add_option("--delta", c.delta, "inter-community target relaxation");
  app.add_option("--weight-decay", c.weight_decay, "decoupled weight decay on W0, W1");
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_flag("--amplify,!--no-amplify", c.amplify, "row-normalize and log before the loss");
  app.add_option("--perm-policy", c.perm_policy, "resample or fixed")
      ->transform(CLI::CheckedTransformer(kPermPolicies));
  app.add_option("--dropout", c.dropout, "dropout rate on layer inputs");
  app.add_option("--qm-normalization", c.qm_normalization, "raw, quarter or half")
      ->transform(CLI::CheckedTransformer(kQmScales));
  app.add_option("--epsilon", c.epsilon, "log floor");
  app.add_option("--out", o.out, "output directory");
  app.add_flag("--overlap", o.overlap, "also write cover.tsv from the exp-mean threshold");
  app.add_flag("--kmeans", o.kmeans, "also write k-means labels of the hidden layer");
  app.add_flag("--timing", o.timing, "add a seconds column to history.csv");
  app.add_option("--manifest", o.manifest, "replay the configuration of a previous run");
}

/// Applies preset defaults to every field the user did not set explicitly.
inline void apply_preset(CLI::App& app, TrainOptions& o) {
  if (o.preset != "overlapping") return;
  const TrainConfig p = TrainConfig::overlapping();
  if (app.count("--hidden") == 0) o.cfg.hidden = p.hidden;
  if (app.count("--weight-decay") == 0) o.cfg.weight_decay = p.weight_decay;
  if (app.count("--delta") == 0) o.cfg.delta = p.delta;
}

inline int run_train(TrainOptions o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.out.empty()) throw InputError("--out is required");
  if (!o.manifest.empty()) {
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(read_file(o.manifest));
      if (m.at("command") != "train") throw InputError(o.manifest + " is not a train manifest");
      const std::string dest = o.out;
      o = TrainOptions::from_json(m.at("config"));
      o.out = dest;
    } catch (const nlohmann::json::exception& e) {
      throw InputError("malformed manifest " + o.manifest + ": " + e.what());
    }
    for (const auto& in : m.at("inputs"))
      if (sha256_hex(read_file(in.at("path").get<std::string>())) != in.at("sha256"))
        throw InputError("input " + in.at("path").get<std::string>() +
                         " changed since the manifest was written");
  }
  o.cfg.check();
  const Dataset d = o.data.load();
  const auto& g = d.graph;
  const TrainResult r = train(g, o.cfg);

  const fs::path dir = o.out;
  std::vector<fs::path> written;
  auto emit = [&](const char* name, const std::string& body) {
    write_text(dir / name, body);
    written.push_back(dir / name);
  };
  const auto c = r.assignment();
  emit("soft.csv", format_matrix_csv(c.matrix()));
  const Partition hard = hard_assign(c);
  emit("labels.txt", format_partition(hard));
  std::optional<Cover> cover;
  if (o.overlap) {
    cover = overlap_assign(c, threshold_p1(c));
    emit("cover.tsv", format_cover(*cover, d.node_names));
  }
  std::optional<Partition> km;
  if (o.kmeans) {
    km = kmeans_assign(r.hidden, o.cfg.k, o.cfg.seed).partition;
    emit("kmeans.txt", format_partition(*km));
  }
  emit("checkpoint.json", checkpoint_json(r.params, o.cfg.seed).dump(1) + "\n");
  emit("history.csv", history_csv(r.history, o.timing));

  const auto& h = r.history;
  out << "trained " << h.records.size() << " epochs: loss " << format_double(h.head_mean())
      << " -> " << format_double(h.tail_mean()) << " (first/last 10% mean)\n";
  if (const auto& truth = g.ground_truth()) {
    const bool is_cover = std::holds_alternative<Cover>(*truth);
    const bool overlap_eval = is_cover && std::get<Cover>(*truth).has_overlap();
    MetricsReport rep;
    if (overlap_eval) {
      const Cover pc = cover ? *cover : overlap_assign(c, threshold_p1(c));
      rep = evaluate_prediction(&g, pc, *truth, EvalMode::overlap);
    } else {
      const Partition tp = is_cover ? to_partition(std::get<Cover>(*truth)) : std::get<Partition>(*truth);
      rep = evaluate_prediction(&g, hard, tp, EvalMode::hard);
    }
    emit("metrics.json", report_json(rep).dump(2) + "\n");
    out << report_table(rep);
  }
  write_manifest(dir, "train", o.to_json(), o.cfg.seed, o.data.files(), written, seconds_since(t0));
  return 0;
}

// eval -----------------------------------------------------------------------

struct EvalOptions {
  DataOptions data;
  std::string mode = "hard";
  std::string pred, truth;
  bool raw = false;
  std::string out;
};

/// Node count of a cover file without a graph: names table size, else max id + 1.
inline Cover read_cover(const std::string& path, const NodeIndex& index, std::optional<std::size_t> n) {
  const TextSource src = TextSource::file(path);
  if (!n) {
    if (index.named()) {
      n = index.names().size();
    } else {
      std::size_t max_id = 0;
      for (const auto& [no, line] : io_detail::content_lines(src.read())) {
        const auto tok = io_detail::split_ws(line);
        if (tok.size() == 2)
          if (auto v = index.lookup(tok[1])) max_id = std::max(max_id, static_cast<std::size_t>(*v) + 1);
      }
      n = max_id;
    }
  }
  return parse_cover(src, index, *n);
}

inline int run_eval(const EvalOptions& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.pred.empty() || o.truth.empty()) throw InputError("--pred and --truth are required");
  std::optional<Dataset> d;
  if (o.data.given()) d = o.data.load();
  const AttributedGraph* g = d ? &d->graph : nullptr;
  const double scale = o.raw ? 1.0 : 100.0;

  MetricsReport rep;
  if (o.mode == "hard") {
    const Partition p = parse_labels(TextSource::file(o.pred));
    const Partition t = parse_labels(TextSource::file(o.truth));
    if (p.size() != t.size())
      throw InputError("node counts differ: prediction has " + std::to_string(p.size()) +
                       ", truth has " + std::to_string(t.size()));
    rep = evaluate_prediction(g, p, t, EvalMode::hard, scale);
  } else {
    NodeIndex index;
    if (!o.data.nodes.empty()) {
      std::vector<std::string> names;
      for (const auto& [no, line] : io_detail::content_lines(read_file(o.data.nodes)))
        names.push_back(line);
      index = NodeIndex(std::move(names));
    }
    std::optional<std::size_t> n;
    if (g) n = static_cast<std::size_t>(g->num_nodes());
    const Cover p = read_cover(o.pred, index, n);
    const Cover t = read_cover(o.truth, index, n);
    if (p.n != t.n)
      throw InputError("node counts differ: prediction has " + std::to_string(p.n) +
                       ", truth has " + std::to_string(t.n));
    rep = evaluate_prediction(g, p, t, EvalMode::overlap, scale);
  }
  const std::string js = report_json(rep).dump(2);
  out << js << "\n" << report_table(rep);
  if (!o.out.empty()) {
    const fs::path dir = o.out;
    write_text(dir / "report.json", js + "\n");
    auto files = o.data.files();
    files.push_back(o.pred);
    files.push_back(o.truth);
    write_manifest(dir, "eval",
                   {{"data", o.data.to_json()}, {"mode", o.mode}, {"pred", o.pred},
                    {"truth", o.truth}, {"raw", o.raw}},
                   0, files, {dir / "report.json"}, seconds_since(t0));
  }
  return 0;
}

// oracle ---------------------------------------------------------------------

// Loss values quoted for the two bowtie reference clusterings in the
// literature; recorded in the sweep output as matches_expected.
inline constexpr double kQuotedDisjointLoss = 0.124;
inline constexpr double kQuotedOverlappingLoss = 0.094;

struct OracleCliOptions {
  DataOptions data;
  int k = 2;
  std::string levels = "0,0.5,1";
  double budget = 1e8;
  double delta = 0.0;
  bool amplify = false;
  std::size_t top = 20;
  unsigned threads = 0;
  bool sweep = true;
  std::string out;
};

inline std::vector<double> parse_levels(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    auto v = io_detail::parse_double(cell);
    if (!v) throw InputError("cannot parse grid level '" + cell + "'");
    out.push_back(*v);
  }
  return out;
}

inline int run_oracle(const OracleCliOptions& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset d = o.data.load();
  const auto& g = d.graph;
  GridSpec grid;
  grid.levels = parse_levels(o.levels);
  grid.k = o.k;
  OracleOptions opts;
  opts.budget = o.budget;
  opts.top = o.top;
  opts.threads = o.threads;
  LossConfig cfg;
  cfg.delta = o.delta;
  cfg.amplify = o.amplify;
  cfg.perm_policy = PermPolicy::fixed_derangement;
  const Permutation perm = Permutation::cyclic_shift(o.k);

  const OracleResult res = exhaustive_min(g, grid, cfg, perm, opts);
  const std::string ranked = format_ranked_csv(res);
  out << ranked;

  std::string sweep;
  if (o.sweep) {
    std::vector<NamedAssignment> refs;
    if (o.data.builtin == "bowtie" && o.k == 2) {
      refs = bowtie_references();
      refs[0].expected_loss = kQuotedDisjointLoss;
      refs[1].expected_loss = kQuotedOverlappingLoss;
    }
    sweep = format_sweep_csv(config_sweep(g, grid, perm, refs, 0.005, opts), refs);
    out << "\n" << sweep;
  }
  if (!o.out.empty()) {
    const fs::path dir = o.out;
    std::vector<fs::path> written{dir / "ranked.csv"};
    write_text(dir / "ranked.csv", ranked);
    if (o.sweep) {
      write_text(dir / "sweep.csv", sweep);
      written.push_back(dir / "sweep.csv");
    }
    write_manifest(dir, "oracle",
                   {{"data", o.data.to_json()}, {"k", o.k}, {"levels", o.levels},
                    {"budget", o.budget}, {"delta", o.delta}, {"amplify", o.amplify},
                    {"top", o.top}, {"sweep", o.sweep}},
                   0, o.data.files(), written, seconds_since(t0));
  }
  return 0;
}

// synth ----------------------------------------------------------------------

struct SynthOptions {
  SbmConfig sbm;
  std::string out;
};

inline int run_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.out.empty()) throw InputError("--out is required");
  const SbmResult r = sbm_generate(o.sbm);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  const fs::path dir = o.out;
  std::vector<std::string> names;
  for (int i = 0; i < o.sbm.n; ++i) names.push_back(std::to_string(i));
  auto written = save_bundle(Dataset{r.graph, names}, dir);
  // both truth views, whichever one save_bundle picked
  if (!fs::exists(dir / "labels.txt")) {
    write_text(dir / "labels.txt", format_partition(r.primary));
    written.push_back(dir / "labels.txt");
  }
  if (!fs::exists(dir / "cover.tsv")) {
    write_text(dir / "cover.tsv", format_cover(r.cover));
    written.push_back(dir / "cover.tsv");
  }
  const auto& s = o.sbm;
  write_manifest(dir, "synth",
                 {{"n", s.n}, {"k", s.k_planted}, {"p_in", s.p_in}, {"p_out", s.p_out},
                  {"overlap_fraction", s.overlap_fraction}, {"feature_dim", s.feature_dim},
                  {"feature_separation", s.feature_separation}, {"seed", s.seed}},
                 s.seed, {}, written, seconds_since(t0));
  out << "wrote " << r.graph.num_nodes() << " nodes, " << r.graph.num_edges() << " edges to "
      << dir.string() << "\n";
  return 0;
}

// dispatch -------------------------------------------------------------------

/// Runs one command line (without the program name). Returns the exit code:
/// 0 ok, 1 input or usage error, 2 numeric failure.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Community detection with a graph convolution network and a contrastive modularity loss"};
  app.name("ucode");
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file; keys go under [train], [eval], [oracle] or [synth]");

  TrainOptions train_opts;
  auto* train_cmd = app.add_subcommand("train", "train on a graph and write assignments");
  bind_train(*train_cmd, train_opts);
  train_cmd->fallthrough();

  EvalOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "score a prediction against ground truth");
  eval_opts.data.bind(*eval_cmd, true);
  eval_cmd->add_option("--mode", eval_opts.mode, "hard or overlap")
      ->check(CLI::IsMember({"hard", "overlap"}));
  eval_cmd->add_option("--pred", eval_opts.pred, "predicted labels or cover");
  eval_cmd->add_option("--truth", eval_opts.truth, "ground-truth labels or cover");
  eval_cmd->add_flag("--raw", eval_opts.raw, "report values in [0,1] instead of x100");
  eval_cmd->add_option("--out", eval_opts.out, "directory for report.json and manifest.json");
  eval_cmd->fallthrough();

  OracleCliOptions oracle_opts;
  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive loss minimization on a tiny graph");
  oracle_opts.data.bind(*oracle_cmd, true);
  oracle_cmd->add_option("--k", oracle_opts.k, "communities")->capture_default_str();
  oracle_cmd->add_option("--levels", oracle_opts.levels, "comma-separated membership levels")
      ->capture_default_str();
  oracle_cmd->add_option("--budget", oracle_opts.budget, "maximum assignments to enumerate");
  oracle_cmd->add_option("--delta", oracle_opts.delta, "target relaxation");
  oracle_cmd->add_flag("--amplify", oracle_opts.amplify, "row-normalize and log before the loss");
  oracle_cmd->add_option("--top", oracle_opts.top, "ranked rows to keep");
  oracle_cmd->add_option("--threads", oracle_opts.threads, "worker threads (0 = all cores)");
  oracle_cmd->add_flag("!--no-sweep", oracle_opts.sweep, "skip the delta x amplify sweep");
  oracle_cmd->add_option("--out", oracle_opts.out, "directory for ranked.csv, sweep.csv, manifest");
  oracle_cmd->fallthrough();

  SynthOptions synth_opts;
  auto* synth_cmd = app.add_subcommand("synth", "write a planted-partition graph bundle");
  auto& s = synth_opts.sbm;
  synth_cmd->add_option("--n", s.n, "nodes")->capture_default_str();
  synth_cmd->add_option("--k", s.k_planted, "planted communities")->capture_default_str();
  synth_cmd->add_option("--p-in", s.p_in, "edge probability inside a community");
  synth_cmd->add_option("--p-out", s.p_out, "edge probability across communities");
  synth_cmd->add_option("--overlap-fraction", s.overlap_fraction, "fraction of nodes with a second community");
  synth_cmd->add_option("--feature-dim", s.feature_dim, "feature width");
  synth_cmd->add_option("--feature-separation", s.feature_separation, "distance of community feature means");
  synth_cmd->add_option("--seed", s.seed, "random seed");
  synth_cmd->add_option("--out", synth_opts.out, "output directory");
  synth_cmd->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*train_cmd) {
      apply_preset(*train_cmd, train_opts);
      return run_train(train_opts, out);
    }
    if (*eval_cmd) return run_eval(eval_opts, out);
    if (*oracle_cmd) return run_oracle(oracle_opts, out);
    if (*synth_cmd) return run_synth(synth_opts, out, err);
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace ucode::cli
