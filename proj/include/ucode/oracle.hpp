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

// Brute-force minimization of the loss over a discrete membership grid.
// Only usable on tiny graphs: the search space is |levels|^(n k).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "ucode/data_io.hpp"
#include "ucode/error.hpp"
#include "ucode/graph.hpp"
#include "ucode/loss.hpp"

namespace ucode {

struct GridSpec {
  std::vector<double> levels{0.0, 0.5, 1.0};
  int k = 2;
  int max_nodes = 8;

  void check() const {
    if (levels.size() < 2) throw InputError("grid needs at least two levels");
    if (!std::is_sorted(levels.begin(), levels.end()))
      throw InputError("grid levels must be sorted");
    if (levels.front() != 0.0 || levels.back() != 1.0)
      throw InputError("grid levels must include 0 and 1");
    if (k < 2) throw InputError("grid needs k >= 2");
    if (max_nodes < 1 || max_nodes > 8) throw InputError("max_nodes must lie in [1, 8]");
  }
};

struct OracleOptions {
  double budget = 1e8;  // maximum number of assignments to enumerate
  std::size_t top = 20;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct RankedAssignment {
  double loss = 0.0;
  Matrix c;  // canonical column order
  bool overlapping = false;
};

struct OracleResult {
  Matrix best;
  double best_loss = 0.0;
  std::vector<RankedAssignment> ranked;  // ascending loss, one entry per column-permutation class
  std::uint64_t evaluated = 0;
};

namespace oracle_detail {

using Digits = std::vector<std::uint8_t>;  // node-major n*k level indices

/// Columns sorted in descending lexicographic order.
inline Digits canonical(const Digits& d, int n, int k) {
  std::vector<Digits> cols(static_cast<std::size_t>(k), Digits(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          d[static_cast<std::size_t>(i * k + j)];
  std::sort(cols.begin(), cols.end(), std::greater<>());
  Digits out(d.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      out[static_cast<std::size_t>(i * k + j)] =
          cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return out;
}

struct Candidate {
  double loss;
  Digits key;
  bool operator<(const Candidate& o) const { return std::tie(loss, key) < std::tie(o.loss, o.key); }
};

/// Sorts and keeps the best entry of the first `top` distinct keys.
inline void prune(std::vector<Candidate>& v, std::size_t top) {
  std::sort(v.begin(), v.end());
  std::vector<Candidate> out;
  for (auto& c : v) {
    if (out.size() >= top) break;
    bool dup = false;
    for (const auto& o : out)
      if (o.key == c.key) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(c));
  }
  v = std::move(out);
}

inline Matrix to_matrix(const Digits& d, const std::vector<double>& levels, int n, int k) {
  Matrix c(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) c(i, j) = levels[d[static_cast<std::size_t>(i * k + j)]];
  return c;
}

}  // namespace oracle_detail

inline bool is_overlapping(const Matrix& c) {
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    int positive = 0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) positive += c(i, j) > 0.0;
    if (positive > 1) return true;
  }
  return false;
}

/// Number of assignments the search would visit.
inline double search_space(int n, const GridSpec& grid) {
  return std::pow(static_cast<double>(grid.levels.size()), static_cast<double>(n) * grid.k);
}

/// Enumerates every grid assignment without an all-zero column and returns
/// the global minimizer of the loss plus a ranked table of the best
/// column-permutation classes. Work is split into contiguous index ranges;
/// the reduction is order-independent, so results do not depend on threads.
inline OracleResult exhaustive_min(const AttributedGraph& g, const GridSpec& grid,
                                   const LossConfig& cfg, const Permutation& perm,
                                   const OracleOptions& opts = {}) {
  using namespace oracle_detail;
  grid.check();
  cfg.check();
  const int n = g.num_nodes(), k = grid.k;
  const double space = search_space(n, grid);
  if (space > opts.budget)
    throw InputError("search space of " + format_double(space) +
                     " assignments exceeds the budget of " + format_double(opts.budget));
  if (n > grid.max_nodes)
    throw InputError("oracle is limited to " + std::to_string(grid.max_nodes) +
                     " nodes, graph has " + std::to_string(n));
  if (perm.k() != k || !perm.is_derangement())
    throw InputError("oracle needs a fixed derangement of size k");

  const auto total = static_cast<std::uint64_t>(space);
  const auto levels = static_cast<std::uint8_t>(grid.levels.size());
  const std::size_t cells = static_cast<std::size_t>(n * k);
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, total));

  struct Chunk {
    std::vector<Candidate> best;
    std::uint64_t evaluated = 0;
  };
  std::vector<Chunk> chunks(threads);

  auto work = [&](unsigned t) {
    const std::uint64_t lo = total * t / threads, hi = total * (t + 1) / threads;
    Digits d(cells, 0);
    std::uint64_t rest = lo;  // digit 0 is the least significant (last cell)
    for (std::size_t c = cells; c-- > 0;) {
      d[c] = static_cast<std::uint8_t>(rest % levels);
      rest /= levels;
    }
    auto& out = chunks[t];
    std::vector<int> col_nonzero(static_cast<std::size_t>(k));
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::fill(col_nonzero.begin(), col_nonzero.end(), 0);
      for (std::size_t c = 0; c < cells; ++c) col_nonzero[c % static_cast<std::size_t>(k)] |= d[c] != 0;
      const bool valid = std::all_of(col_nonzero.begin(), col_nonzero.end(), [](int v) { return v; });
      if (valid) {
        const double loss = loss_of_assignment(g, to_matrix(d, grid.levels, n, k), cfg, perm);
        ++out.evaluated;
        if (out.best.size() < opts.top || loss <= out.best.back().loss) {
          out.best.push_back({loss, canonical(d, n, k)});
          if (out.best.size() >= 4 * opts.top) prune(out.best, opts.top);
          else std::sort(out.best.begin(), out.best.end());
        }
      }
      for (std::size_t c = cells; c-- > 0;) {  // odometer increment
        if (++d[c] < levels) break;
        d[c] = 0;
      }
    }
    prune(out.best, opts.top);
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  std::vector<Candidate> merged;
  OracleResult res;
  for (auto& ch : chunks) {
    res.evaluated += ch.evaluated;
    for (auto& c : ch.best) merged.push_back(std::move(c));
  }
  prune(merged, opts.top);
  if (merged.empty()) throw InputError("oracle found no admissible assignment");
  for (const auto& c : merged) {
    RankedAssignment r;
    r.loss = c.loss;
    r.c = to_matrix(c.key, grid.levels, n, k);
    r.overlapping = is_overlapping(r.c);
    res.ranked.push_back(std::move(r));
  }
  res.best = res.ranked.front().c;
  res.best_loss = res.ranked.front().loss;
  return res;
}

/// True when `a` equals `b` up to a permutation of columns.
inline bool same_up_to_column_permutation(const Matrix& a, const Matrix& b, double tol = 1e-12) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  std::vector<int> order(static_cast<std::size_t>(a.cols()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  do {
    bool eq = true;
    for (Eigen::Index j = 0; j < a.cols() && eq; ++j)
      eq = (a.col(j) - b.col(order[static_cast<std::size_t>(j)])).cwiseAbs().maxCoeff() <= tol;
    if (eq) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

struct NamedAssignment {
  std::string name;
  Matrix c;
  std::optional<double> expected_loss;  // reference value to compare against, if any
};

struct SweepRow {
  double delta = 0.0;
  bool amplify = false;
  std::vector<double> reference_losses;  // aligned with the references passed in
  double argmin_loss = 0.0;
  Matrix argmin;
  bool argmin_overlapping = false;
  bool matches_expected = false;  // every reference with an expected value is within tolerance
};

/// Runs the oracle under delta in {0, 0.85} x amplify in {off, on}.
inline std::vector<SweepRow> config_sweep(const AttributedGraph& g, const GridSpec& grid,
                                          const Permutation& perm,
                                          const std::vector<NamedAssignment>& refs = {},
                                          double tolerance = 0.005,
                                          const OracleOptions& opts = {}) {
  std::vector<SweepRow> rows;
  for (double delta : {0.0, 0.85}) {
    for (bool amp : {false, true}) {
      LossConfig cfg;
      cfg.delta = delta;
      cfg.amplify = amp;
      cfg.perm_policy = PermPolicy::fixed_derangement;
      SweepRow row;
      row.delta = delta;
      row.amplify = amp;
      bool any_expected = false, all_match = true;
      for (const auto& r : refs) {
        const double l = loss_of_assignment(g, r.c, cfg, perm);
        row.reference_losses.push_back(l);
        if (r.expected_loss) {
          any_expected = true;
          all_match = all_match && std::abs(l - *r.expected_loss) <= tolerance;
        }
      }
      row.matches_expected = any_expected && all_match;
      const auto res = exhaustive_min(g, grid, cfg, perm, opts);
      row.argmin_loss = res.best_loss;
      row.argmin = res.best;
      row.argmin_overlapping = is_overlapping(res.best);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

/// Columns joined with '|', entries with ';' (e.g. "1;1;0.5;0;0|0;0;0.5;1;1").
inline std::string encode_assignment(const Matrix& c) {
  std::string s;
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    if (j) s += '|';
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      if (i) s += ';';
      s += format_double(c(i, j));
    }
  }
  return s;
}

inline std::string format_ranked_csv(const OracleResult& r) {
  std::string s = "rank,loss,overlapping,assignment\n";
  for (std::size_t i = 0; i < r.ranked.size(); ++i)
    s += std::to_string(i + 1) + ',' + format_double(r.ranked[i].loss) + ',' +
         (r.ranked[i].overlapping ? "1" : "0") + ',' + encode_assignment(r.ranked[i].c) + '\n';
  return s;
}

inline std::string format_sweep_csv(const std::vector<SweepRow>& rows,
                                    const std::vector<NamedAssignment>& refs) {
  std::string s = "delta,amplify";
  for (const auto& r : refs) s += ",loss_" + r.name;
  s += ",argmin_loss,argmin_overlapping,matches_expected,argmin\n";
  for (const auto& row : rows) {
    s += format_double(row.delta) + ',' + (row.amplify ? "1" : "0");
    for (double l : row.reference_losses) s += ',' + format_double(l);
    s += ',' + format_double(row.argmin_loss) + ',' + (row.argmin_overlapping ? "1" : "0") + ',' +
         (row.matches_expected ? "1" : "0") + ',' + encode_assignment(row.argmin) + '\n';
  }
  return s;
}

/// The two bowtie reference clusterings: disjoint {0,1}/{2,3,4} and the
/// overlapping one sharing node 2 at 0.5.
inline std::vector<NamedAssignment> bowtie_references() {
  Matrix disjoint(5, 2), shared(5, 2);
  disjoint << 1, 0, 1, 0, 0, 1, 0, 1, 0, 1;
  shared << 1, 0, 1, 0, 0.5, 0.5, 0, 1, 0, 1;
  return {{"disjoint", disjoint, std::nullopt}, {"overlapping", shared, std::nullopt}};
}

}  // namespace ucode
