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

// Ground-truth comparison scores. All return values in [0,1].

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ucode/community.hpp"
#include "ucode/error.hpp"

namespace ucode {

namespace detail {

inline void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw InputError(std::string(what) + ": node counts differ (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
}

inline double xlogx_over(double w, double n) { return w > 0.0 ? -w * std::log(w / n) : 0.0; }

inline double pairs(double c) { return c * (c - 1.0) / 2.0; }

}  // namespace detail

/// I(a;b) / sqrt(H(a) H(b)) with natural logs.
inline double nmi(const Partition& a, const Partition& b) {
  detail::check_same_size(a.size(), b.size(), "nmi");
  const double n = static_cast<double>(a.size());
  if (a.size() == 0) throw InputError("nmi of empty partitions");
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ca, cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a.labels[i], b.labels[i]}] += 1.0;
    ca[a.labels[i]] += 1.0;
    cb[b.labels[i]] += 1.0;
  }
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (auto [l, c] : ca) ha += detail::xlogx_over(c, n) / n;
  for (auto [l, c] : cb) hb += detail::xlogx_over(c, n) / n;
  for (auto [key, c] : joint)
    mi += c / n * std::log(c * n / (ca[key.first] * cb[key.second]));
  if (ha <= 0.0 || hb <= 0.0) {
    // a zero-entropy side is a single cluster; equal only if both are
    return (ha <= 0.0 && hb <= 0.0) ? 1.0 : 0.0;
  }
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

/// Overlapping NMI in the max-normalized form of McDaid et al.:
///   NMI_max = 1/2 [H(X) - H(X|Y) + H(Y) - H(Y|X)] / max(H(X), H(Y))
/// where each community is a binary variable over nodes and H(X_k|Y) is the
/// smallest admissible H(X_k|Y_l), falling back to H(X_k).
inline double onmi(const Cover& a, const Cover& b) {
  detail::check_same_size(a.n, b.n, "onmi");
  auto non_empty = [](const Cover& c) {
    std::vector<std::vector<int>> s;
    for (const auto& set : c.sets)
      if (!set.empty()) s.push_back(set);
    return s;
  };
  const auto xs = non_empty(a), ys = non_empty(b);
  if (xs.empty() || ys.empty()) throw InputError("onmi of an empty cover");
  const double n = static_cast<double>(a.n);

  // |X_k ∩ Y_l| via per-node membership in Y
  std::vector<std::vector<int>> y_of(a.n);
  for (std::size_t l = 0; l < ys.size(); ++l)
    for (int v : ys[l]) y_of[static_cast<std::size_t>(v)].push_back(static_cast<int>(l));
  std::vector<std::vector<double>> inter(xs.size(), std::vector<double>(ys.size(), 0.0));
  for (std::size_t k = 0; k < xs.size(); ++k)
    for (int v : xs[k])
      for (int l : y_of[static_cast<std::size_t>(v)]) inter[k][static_cast<std::size_t>(l)] += 1.0;

  auto h = [n](double w) { return detail::xlogx_over(w, n); };
  auto entropy = [&](double size) { return h(size) + h(n - size); };

  // sum over rows of X of H(X_k | Y); `transpose` swaps the roles
  auto conditional = [&](const std::vector<std::vector<int>>& rows,
                         const std::vector<std::vector<int>>& cols, bool transpose) {
    double total = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double sx = static_cast<double>(rows[k].size());
      double best = entropy(sx);
      for (std::size_t l = 0; l < cols.size(); ++l) {
        const double sy = static_cast<double>(cols[l].size());
        const double d = transpose ? inter[l][k] : inter[k][l];
        const double c = sx - d;          // in X only
        const double bb = sy - d;         // in Y only
        const double aa = n - sx - sy + d;  // in neither
        if (h(aa) + h(d) > h(bb) + h(c)) {
          const double cond = h(aa) + h(bb) + h(c) + h(d) - h(bb + d) - h(aa + c);
          best = std::min(best, cond);
        }
      }
      total += best;
    }
    return total;
  };

  double hx = 0.0, hy = 0.0;
  for (const auto& s : xs) hx += entropy(static_cast<double>(s.size()));
  for (const auto& s : ys) hy += entropy(static_cast<double>(s.size()));
  const double hx_y = conditional(xs, ys, false);
  const double hy_x = conditional(ys, xs, true);
  const double denom = std::max(hx, hy);
  if (denom <= 0.0) return 1.0;  // only whole-universe sets on both sides
  const double mi = 0.5 * (hx - hx_y + hy - hy_x);
  return std::clamp(mi / denom, 0.0, 1.0);
}

/// Pairwise F1 over all node pairs; a pair is positive when both nodes share
/// a community in `truth`. Zero true positives gives 0.
inline double pairwise_f1(const Partition& truth, const Partition& pred) {
  detail::check_same_size(truth.size(), pred.size(), "pairwise_f1");
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ct, cp;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    joint[{truth.labels[i], pred.labels[i]}] += 1.0;
    ct[truth.labels[i]] += 1.0;
    cp[pred.labels[i]] += 1.0;
  }
  double tp = 0.0, tpos = 0.0, ppos = 0.0;
  for (auto [key, c] : joint) tp += detail::pairs(c);
  for (auto [l, c] : ct) tpos += detail::pairs(c);
  for (auto [l, c] : cp) ppos += detail::pairs(c);
  if (tp <= 0.0) return 0.0;
  const double precision = tp / ppos, recall = tp / tpos;
  return 2.0 * precision * recall / (precision + recall);
}

/// Pairwise F1 where a pair is positive when the two nodes share any set.
inline double pairwise_f1(const Cover& truth, const Cover& pred) {
  detail::check_same_size(truth.n, pred.n, "pairwise_f1");
  auto mt = truth.memberships(), mp = pred.memberships();
  for (auto& m : mt) std::sort(m.begin(), m.end());
  for (auto& m : mp) std::sort(m.begin(), m.end());
  auto share = [](const std::vector<int>& x, const std::vector<int>& y) {
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
      if (x[i] == y[j]) return true;
      x[i] < y[j] ? ++i : ++j;
    }
    return false;
  };
  double tp = 0.0, tpos = 0.0, ppos = 0.0;
  for (std::size_t u = 0; u < truth.n; ++u)
    for (std::size_t v = u + 1; v < truth.n; ++v) {
      const bool t = share(mt[u], mt[v]), p = share(mp[u], mp[v]);
      tpos += t;
      ppos += p;
      tp += t && p;
    }
  if (tp <= 0.0) return 0.0;
  const double precision = tp / ppos, recall = tp / tpos;
  return 2.0 * precision * recall / (precision + recall);
}

/// Mean over ground-truth sets of the best recall |t ∩ p| / |t| over predicted sets.
inline double recall_best_match(const Cover& truth, const Cover& pred) {
  detail::check_same_size(truth.n, pred.n, "recall_best_match");
  if (truth.sets.empty() || pred.sets.empty()) throw InputError("recall of an empty cover");
  std::vector<std::vector<int>> p_of(pred.n);
  for (std::size_t l = 0; l < pred.sets.size(); ++l)
    for (int v : pred.sets[l]) p_of[static_cast<std::size_t>(v)].push_back(static_cast<int>(l));
  double total = 0.0;
  std::size_t counted = 0;
  for (const auto& t : truth.sets) {
    if (t.empty()) continue;
    std::vector<double> hit(pred.sets.size(), 0.0);
    for (int v : t)
      for (int l : p_of[static_cast<std::size_t>(v)]) hit[static_cast<std::size_t>(l)] += 1.0;
    total += *std::max_element(hit.begin(), hit.end()) / static_cast<double>(t.size());
    ++counted;
  }
  return counted ? total / static_cast<double>(counted) : 0.0;
}

}  // namespace ucode
