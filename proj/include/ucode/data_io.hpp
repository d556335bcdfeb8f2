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

// Text dataset formats:
//   edges.tsv     "u<TAB>v" per line, '#' comments
//   features.csv  one row of comma-separated reals per node
//   labels.txt    one integer label per node line
//   cover.tsv     "community<TAB>node" per membership
//   nodes.txt     optional; one node name per line, defines the index order
// LF or CRLF line endings.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ucode/community.hpp"
#include "ucode/error.hpp"
#include "ucode/graph.hpp"

namespace ucode {

/// A text payload given either as a file or inline.
struct TextSource {
  std::filesystem::path path;
  std::optional<std::string> inline_text;

  static TextSource file(std::filesystem::path p) { return {std::move(p), std::nullopt}; }
  static TextSource text(std::string s, std::string name = "<inline>") {
    return {std::move(name), std::move(s)};
  }

  std::string name() const { return path.string(); }

  std::string read() const {
    if (inline_text) return *inline_text;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

struct DatasetBundle {
  TextSource edges;
  std::optional<TextSource> features;
  std::optional<TextSource> labels;
  std::optional<TextSource> cover;
  std::optional<TextSource> nodes;
  std::optional<int> declared_n;
  std::optional<int> declared_l;
};

/// A graph together with the node-name table used to remap file labels.
struct Dataset {
  AttributedGraph graph;
  std::vector<std::string> node_names;  // index -> original label
};

namespace io_detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

/// Non-empty, non-comment lines with their 1-based line numbers.
inline std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(no, std::string(t));
  }
  return out;
}

/// Raw lines (blank lines kept) for formats where line index = node index.
inline std::vector<std::pair<int, std::string>> indexed_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto t = trim(line);
    if (!t.empty() && t.front() == '#') continue;
    out.emplace_back(no, std::string(t));
  }
  while (!out.empty() && out.back().second.empty()) out.pop_back();
  return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<long long> parse_int(std::string_view s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string where(const TextSource& src, int line) {
  return src.name() + ":" + std::to_string(line) + ": ";
}

}  // namespace io_detail

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

inline Matrix parse_features(const TextSource& src) {
  const auto lines = io_detail::content_lines(src.read());
  std::vector<std::vector<double>> rows;
  for (const auto& [no, line] : lines) {
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto cell = std::string_view(line).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      auto v = io_detail::parse_double(cell);
      if (!v)
        throw InputError(io_detail::where(src, no) + "cannot parse feature value '" +
                         std::string(io_detail::trim(cell)) + "'");
      row.push_back(*v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError(io_detail::where(src, no) + "row has " + std::to_string(row.size()) +
                       " values, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  Matrix x(static_cast<Eigen::Index>(rows.size()),
           rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return x;
}

/// One integer per line; labels are remapped to 0..k-1 in ascending order.
inline Partition parse_labels(const TextSource& src) {
  const auto lines = io_detail::indexed_lines(src.read());
  std::vector<long long> raw;
  for (const auto& [no, line] : lines) {
    auto v = io_detail::parse_int(line);
    if (!v) throw InputError(io_detail::where(src, no) + "expected an integer label, got '" + line + "'");
    raw.push_back(*v);
  }
  std::map<long long, int> dense;
  for (auto v : raw) dense.emplace(v, 0);
  int next = 0;
  for (auto& [k, v] : dense) v = next++;
  Partition p;
  for (auto v : raw) p.labels.push_back(dense[v]);
  return p;
}

/// Node-name lookup shared by the edge and cover parsers.
class NodeIndex {
 public:
  NodeIndex() = default;
  explicit NodeIndex(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (!index_.emplace(names_[i], static_cast<int>(i)).second)
        throw InputError("duplicate node name '" + names_[i] + "'");
  }

  bool named() const { return !names_.empty(); }

  /// Index of a node token; integers are taken literally without a names table.
  std::optional<int> lookup(const std::string& token) const {
    if (named()) {
      auto it = index_.find(token);
      if (it == index_.end()) return std::nullopt;
      return it->second;
    }
    auto v = io_detail::parse_int(token);
    if (!v || *v < 0 || *v > std::numeric_limits<int>::max()) return std::nullopt;
    return static_cast<int>(*v);
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

inline std::vector<Edge> parse_edges(const TextSource& src, const NodeIndex& index) {
  std::vector<Edge> edges;
  std::set<Edge> seen;
  for (const auto& [no, line] : io_detail::content_lines(src.read())) {
    const auto tok = io_detail::split_ws(line);
    if (tok.size() != 2)
      throw InputError(io_detail::where(src, no) + "expected 'u<TAB>v', got '" + line + "'");
    auto u = index.lookup(tok[0]), v = index.lookup(tok[1]);
    if (!u || !v)
      throw InputError(io_detail::where(src, no) + "unknown node '" + (u ? tok[1] : tok[0]) +
                       (index.named() ? "' (not in nodes file)"
                                      : "' (non-integer ids need a nodes file)"));
    // reversed and repeated lines describe the same undirected edge
    if (!seen.insert(std::minmax(*u, *v)).second) continue;
    edges.emplace_back(*u, *v);
  }
  return edges;
}

/// "community<TAB>node" lines; community ids are densified in ascending order
/// when numeric, else by first appearance.
inline Cover parse_cover(const TextSource& src, const NodeIndex& index, std::size_t n) {
  std::vector<std::pair<std::string, int>> entries;
  for (const auto& [no, line] : io_detail::content_lines(src.read())) {
    const auto tok = io_detail::split_ws(line);
    if (tok.size() != 2)
      throw InputError(io_detail::where(src, no) + "expected 'community<TAB>node', got '" + line + "'");
    auto v = index.lookup(tok[1]);
    if (!v || static_cast<std::size_t>(*v) >= n)
      throw InputError(io_detail::where(src, no) + "unknown or out-of-range node '" + tok[1] + "'");
    entries.emplace_back(tok[0], *v);
  }
  const bool numeric = std::all_of(entries.begin(), entries.end(), [](const auto& e) {
    return io_detail::parse_int(e.first).has_value();
  });
  std::vector<std::string> order;
  if (numeric) {
    std::set<long long> ids;
    for (const auto& e : entries) ids.insert(*io_detail::parse_int(e.first));
    for (auto id : ids) order.push_back(std::to_string(id));
  } else {
    std::set<std::string> seen;
    for (const auto& e : entries)
      if (seen.insert(e.first).second) order.push_back(e.first);
  }
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  Cover c;
  c.n = n;
  c.sets.resize(order.size());
  for (const auto& [comm, v] : entries) {
    const auto key = numeric ? std::to_string(*io_detail::parse_int(comm)) : comm;
    c.sets[pos[key]].push_back(v);
  }
  for (auto& s : c.sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return c;
}

inline constexpr int kMaxIdentityFeatures = 5000;

/// Parses and validates a bundle. Node count comes from, in order: the
/// declared n, the nodes file, the feature rows, the largest edge id + 1.
inline Dataset load_bundle(const DatasetBundle& b) {
  NodeIndex index;
  if (b.nodes) {
    std::vector<std::string> names;
    for (const auto& [no, line] : io_detail::content_lines(b.nodes->read())) names.push_back(line);
    index = NodeIndex(std::move(names));
  }
  auto edges = parse_edges(b.edges, index);
  std::optional<Matrix> features;
  if (b.features) features = parse_features(*b.features);

  int n = 0;
  if (b.declared_n) n = *b.declared_n;
  else if (index.named()) n = static_cast<int>(index.names().size());
  else if (features) n = static_cast<int>(features->rows());
  else
    for (auto [u, v] : edges) n = std::max({n, u + 1, v + 1});

  if (!features) {
    if (n > kMaxIdentityFeatures)
      throw InputError("no features given and n = " + std::to_string(n) +
                       " is too large for one-hot identity features");
    features = Matrix::Identity(n, n);
  }
  if (b.declared_l && features->cols() != *b.declared_l)
    throw InputError("features have " + std::to_string(features->cols()) +
                     " columns, declared l = " + std::to_string(*b.declared_l));
  if (auto err = validate(n, edges, *features)) throw InputError(err->message);

  std::optional<GroundTruth> truth;
  if (b.cover) {
    truth = parse_cover(*b.cover, index, static_cast<std::size_t>(n));
  } else if (b.labels) {
    Partition p = parse_labels(*b.labels);
    if (static_cast<int>(p.size()) != n)
      throw InputError(b.labels->name() + ": " + std::to_string(p.size()) +
                       " labels for a graph with " + std::to_string(n) + " nodes");
    truth = std::move(p);
  }

  std::vector<std::string> names = index.names();
  if (names.empty())
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return Dataset{AttributedGraph(n, std::move(edges), std::move(*features), std::move(truth)),
                 std::move(names)};
}

inline void write_text(const std::filesystem::path& p, const std::string& body) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << body;
}

inline std::string format_matrix_csv(const Matrix& m) {
  std::string s;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) s += ',';
      s += format_double(m(i, j));
    }
    s += '\n';
  }
  return s;
}

inline std::string format_partition(const Partition& p) {
  std::string s;
  for (int l : p.labels) s += std::to_string(l) + '\n';
  return s;
}

inline std::string format_cover(const Cover& c, const std::vector<std::string>& names = {}) {
  std::string s;
  for (std::size_t k = 0; k < c.sets.size(); ++k)
    for (int v : c.sets[k])
      s += std::to_string(k) + '\t' +
           (names.empty() ? std::to_string(v) : names[static_cast<std::size_t>(v)]) + '\n';
  return s;
}

inline bool identity_names(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] != std::to_string(i)) return false;
  return true;
}

/// Writes edges.tsv, features.csv, and labels.txt or cover.tsv per the
/// ground truth; nodes.txt only when names are not 0..n-1.
inline std::vector<std::filesystem::path> save_bundle(const Dataset& d,
                                                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& g = d.graph;
  const auto& names = d.node_names;
  std::vector<std::filesystem::path> written;
  std::string edges;
  for (auto [u, v] : g.edges())
    edges += names[static_cast<std::size_t>(u)] + '\t' + names[static_cast<std::size_t>(v)] + '\n';
  write_text(dir / "edges.tsv", edges);
  written.push_back(dir / "edges.tsv");
  write_text(dir / "features.csv", format_matrix_csv(g.features()));
  written.push_back(dir / "features.csv");
  if (!identity_names(names)) {
    std::string s;
    for (const auto& n : names) s += n + '\n';
    write_text(dir / "nodes.txt", s);
    written.push_back(dir / "nodes.txt");
  }
  if (const auto& t = g.ground_truth()) {
    if (const auto* p = std::get_if<Partition>(&*t)) {
      write_text(dir / "labels.txt", format_partition(*p));
      written.push_back(dir / "labels.txt");
    } else {
      write_text(dir / "cover.tsv", format_cover(std::get<Cover>(*t), names));
      written.push_back(dir / "cover.tsv");
    }
  }
  return written;
}

/// Bundle pointing at the files save_bundle writes, where present.
inline DatasetBundle bundle_in(const std::filesystem::path& dir) {
  DatasetBundle b;
  b.edges = TextSource::file(dir / "edges.tsv");
  auto opt = [&](const char* name) -> std::optional<TextSource> {
    if (std::filesystem::exists(dir / name)) return TextSource::file(dir / name);
    return std::nullopt;
  };
  b.features = opt("features.csv");
  b.labels = opt("labels.txt");
  b.cover = opt("cover.tsv");
  b.nodes = opt("nodes.txt");
  return b;
}

// Builtin graphs --------------------------------------------------------------

/// Two triangles sharing node 2: edges 01 02 12 23 24 34, one-hot features,
/// ground-truth cover {0,1,2} / {2,3,4}.
inline AttributedGraph bowtie() {
  Cover truth{5, {{0, 1, 2}, {2, 3, 4}}};
  return AttributedGraph(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}},
                         Matrix::Identity(5, 5), GroundTruth(std::move(truth)));
}

inline AttributedGraph triangle() {
  return AttributedGraph(3, {{0, 1}, {0, 2}, {1, 2}}, Matrix::Identity(3, 3),
                         GroundTruth(Partition{{0, 0, 0}}));
}

inline std::optional<AttributedGraph> builtin_graph(const std::string& name) {
  if (name == "bowtie") return bowtie();
  if (name == "triangle") return triangle();
  return std::nullopt;
}

// Synthetic graphs ------------------------------------------------------------

struct SbmConfig {
  int n = 100;
  int k_planted = 4;
  double p_in = 0.3;
  double p_out = 0.02;
  double overlap_fraction = 0.0;
  int feature_dim = 8;
  double feature_separation = 2.0;
  std::uint64_t seed = 0;

  void check() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(p_in) || !prob(p_out))
      throw InputError("invalid probabilities: p_in and p_out must lie in [0,1]");
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
      throw InputError("overlap fraction must lie in [0,1)");
    if (n < 1 || k_planted < 1 || k_planted > n)
      throw InputError("need 1 <= k_planted <= n");
    if (feature_dim < 1) throw InputError("feature dimension must be positive");
    if (overlap_fraction > 0.0 && k_planted < 2)
      throw InputError("overlap needs at least two planted communities");
  }
};

struct SbmResult {
  AttributedGraph graph;         // ground truth: Partition, or Cover when overlapping
  Partition primary;             // block of each node
  Cover cover;                   // all memberships
  std::vector<std::string> warnings;
};

/// Planted-partition graph with Gaussian community features.
inline SbmResult sbm_generate(const SbmConfig& cfg) {
  cfg.check();
  std::vector<std::string> warnings;
  if (!(cfg.p_in > cfg.p_out)) warnings.push_back("p_in <= p_out: no planted signal");
  std::mt19937_64 rng(cfg.seed);
  const int n = cfg.n, k = cfg.k_planted;

  Partition primary;
  for (int i = 0; i < n; ++i)
    primary.labels.push_back(static_cast<int>(static_cast<long long>(i) * k / n));
  std::vector<std::vector<int>> member(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) member[static_cast<std::size_t>(i)] = {primary.labels[static_cast<std::size_t>(i)]};

  const int extra = static_cast<int>(std::lround(cfg.overlap_fraction * n));
  if (extra > 0) {
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < extra; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
      const int v = order[static_cast<std::size_t>(i)];
      std::uniform_int_distribution<int> other(0, k - 2);
      int c = other(rng);
      if (c >= primary.labels[static_cast<std::size_t>(v)]) ++c;
      member[static_cast<std::size_t>(v)].push_back(c);
      std::sort(member[static_cast<std::size_t>(v)].begin(), member[static_cast<std::size_t>(v)].end());
    }
  }
  auto share = [&](int u, int v) {
    for (int a : member[static_cast<std::size_t>(u)])
      for (int b : member[static_cast<std::size_t>(v)])
        if (a == b) return true;
    return false;
  };

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (unit(rng) < (share(u, v) ? cfg.p_in : cfg.p_out)) edges.emplace_back(u, v);

  std::normal_distribution<double> noise(0.0, 1.0);
  Matrix x(n, cfg.feature_dim);
  for (int i = 0; i < n; ++i) {
    const auto& m = member[static_cast<std::size_t>(i)];
    for (int j = 0; j < cfg.feature_dim; ++j) {
      double mean = 0.0;
      for (int c : m)
        if (c % cfg.feature_dim == j) mean += cfg.feature_separation;
      x(i, j) = mean / static_cast<double>(m.size()) + noise(rng);
    }
  }

  Cover cover;
  cover.n = static_cast<std::size_t>(n);
  cover.sets.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i)
    for (int c : member[static_cast<std::size_t>(i)]) cover.sets[static_cast<std::size_t>(c)].push_back(i);

  GroundTruth truth = extra > 0 ? GroundTruth(cover) : GroundTruth(primary);
  return SbmResult{AttributedGraph(n, std::move(edges), std::move(x), std::move(truth)),
                   std::move(primary), std::move(cover), std::move(warnings)};
}

}  // namespace ucode
