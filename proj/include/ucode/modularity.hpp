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

#include <cstddef>
#include <string>
#include <vector>

#include "ucode/community.hpp"
#include "ucode/error.hpp"
#include "ucode/graph.hpp"

namespace ucode {

/// n x k membership strengths in [0,1], k >= 2.
class CommunityAssignment {
 public:
  explicit CommunityAssignment(Matrix c) : c_(std::move(c)) {
    if (c_.rows() < 1) throw InputError("community assignment needs at least one node");
    if (c_.cols() < 2) throw InputError("community assignment needs k >= 2 columns");
    for (Eigen::Index i = 0; i < c_.rows(); ++i)
      for (Eigen::Index j = 0; j < c_.cols(); ++j)
        if (!(c_(i, j) >= 0.0 && c_(i, j) <= 1.0))
          throw InputError("membership (" + std::to_string(i) + "," + std::to_string(j) +
                           ") = " + std::to_string(c_(i, j)) + " is outside [0,1]");
  }

  /// Clamps an arbitrary real matrix into [0,1].
  static CommunityAssignment clamped(const Matrix& raw) {
    return CommunityAssignment(raw.cwiseMax(0.0).cwiseMin(1.0));
  }

  /// One-hot encoding of a partition with k columns.
  static CommunityAssignment one_hot(const Partition& p, int k) {
    Matrix c = Matrix::Zero(static_cast<Eigen::Index>(p.size()), k);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.labels[i] < 0 || p.labels[i] >= k)
        throw InputError("label " + std::to_string(p.labels[i]) + " outside [0," +
                         std::to_string(k) + ")");
      c(static_cast<Eigen::Index>(i), p.labels[i]) = 1.0;
    }
    return CommunityAssignment(std::move(c));
  }

  /// Binary indicator matrix of a cover; k is padded to at least 2.
  static CommunityAssignment indicator(const Cover& cv) {
    const auto k = std::max<std::size_t>(2, cv.sets.size());
    Matrix c = Matrix::Zero(static_cast<Eigen::Index>(cv.n), static_cast<Eigen::Index>(k));
    for (std::size_t s = 0; s < cv.sets.size(); ++s)
      for (int v : cv.sets[s]) c(v, static_cast<Eigen::Index>(s)) = 1.0;
    return CommunityAssignment(std::move(c));
  }

  const Matrix& matrix() const { return c_; }
  int num_nodes() const { return static_cast<int>(c_.rows()); }
  int num_communities() const { return static_cast<int>(c_.cols()); }

 private:
  Matrix c_;
};

/// Null-model scale applied to Q_M.
enum class ModularityNorm {
  paper_quarter,  // 1 / (4|E|)
  standard_half,  // 1 / (2|E|), Newman
};

/// Q_M = C^T A C - (C^T d)(d^T C) / (2|E|), without forming B.
///
/// Accepts any real n x k matrix: the training path feeds raw network output
/// that can leave [0,1]. Cost is O(|E| k + n k^2).
inline Matrix community_modularity_matrix(const AttributedGraph& g, const Matrix& c) {
  if (c.rows() != g.num_nodes())
    throw InputError("assignment has " + std::to_string(c.rows()) + " rows, graph has " +
                     std::to_string(g.num_nodes()) + " nodes");
  if (g.num_edges() == 0) throw InputError("modularity is undefined on a graph with no edges");
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  const Matrix ac = adjacency(g).multiply(c);
  const Eigen::RowVectorXd dc = degree_column(g).transpose() * c;
  Matrix q = c.transpose() * ac;
  q.noalias() -= dc.transpose() * dc / two_m;
  return q;
}

inline Matrix community_modularity_matrix(const AttributedGraph& g, const CommunityAssignment& c) {
  return community_modularity_matrix(g, c.matrix());
}

inline double modularity_score(const AttributedGraph& g, const Matrix& c,
                               ModularityNorm norm = ModularityNorm::standard_half) {
  const double tr = community_modularity_matrix(g, c).trace();
  const double m = static_cast<double>(g.num_edges());
  return norm == ModularityNorm::paper_quarter ? tr / (4.0 * m) : tr / (2.0 * m);
}

inline double modularity_score(const AttributedGraph& g, const CommunityAssignment& c,
                               ModularityNorm norm = ModularityNorm::standard_half) {
  return modularity_score(g, c.matrix(), norm);
}

inline double modularity_score(const AttributedGraph& g, const Partition& p,
                               ModularityNorm norm = ModularityNorm::standard_half) {
  return modularity_score(g, CommunityAssignment::one_hot(p, std::max(2, p.num_communities())),
                          norm);
}

struct ConductanceReport {
  std::vector<double> per_community;  // indexed by community id; empty ones hold 0
  std::vector<int> zero_volume;       // non-empty communities with no incident edges
  double mean = 0.0;                  // over non-empty communities
};

/// phi(S) = cut(S) / (2 internal(S) + cut(S)) for each set of nodes.
inline ConductanceReport conductance(const AttributedGraph& g,
                                     const std::vector<std::vector<int>>& sets) {
  ConductanceReport r;
  r.per_community.assign(sets.size(), 0.0);
  std::vector<char> in(static_cast<std::size_t>(g.num_nodes()), 0);
  std::size_t non_empty = 0;
  double total = 0.0;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (sets[s].empty()) continue;
    ++non_empty;
    for (int v : sets[s]) in[static_cast<std::size_t>(v)] = 1;
    double internal = 0.0, cut = 0.0;
    for (auto [u, v] : g.edges()) {
      const bool a = in[static_cast<std::size_t>(u)], b = in[static_cast<std::size_t>(v)];
      if (a && b) internal += 1.0;
      else if (a || b) cut += 1.0;
    }
    for (int v : sets[s]) in[static_cast<std::size_t>(v)] = 0;
    const double volume = 2.0 * internal + cut;
    if (volume == 0.0) {
      r.zero_volume.push_back(static_cast<int>(s));
      continue;
    }
    r.per_community[s] = cut / volume;
    total += r.per_community[s];
  }
  r.mean = non_empty ? total / static_cast<double>(non_empty) : 0.0;
  return r;
}

inline ConductanceReport conductance(const AttributedGraph& g, const Partition& p) {
  if (static_cast<int>(p.size()) != g.num_nodes())
    throw InputError("partition has " + std::to_string(p.size()) + " labels, graph has " +
                     std::to_string(g.num_nodes()) + " nodes");
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(p.num_communities()));
  for (std::size_t i = 0; i < p.size(); ++i)
    sets[static_cast<std::size_t>(p.labels[i])].push_back(static_cast<int>(i));
  return conductance(g, sets);
}

inline ConductanceReport conductance(const AttributedGraph& g, const Cover& c) {
  return conductance(g, c.sets);
}

}  // namespace ucode
