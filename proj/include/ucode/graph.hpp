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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ucode/community.hpp"
#include "ucode/error.hpp"

namespace ucode {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

using Edge = std::pair<int, int>;

/// Symmetric sparse matrix in compressed row storage.
class SparseSymMatrix {
 public:
  struct Triplet {
    int row;
    int col;
    double value;
  };

  SparseSymMatrix() = default;

  /// Builds from (row, col, value) entries; duplicates are summed. The caller
  /// supplies both (i,j) and (j,i) for off-diagonal entries.
  SparseSymMatrix(int dim, std::vector<Triplet> entries) : dim_(dim) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_ptr_.assign(static_cast<std::size_t>(dim) + 1, 0);
    int last_row = -1;
    for (const auto& t : entries) {
      if (!col_.empty() && last_row == t.row && col_.back() == t.col) {
        val_.back() += t.value;
        continue;
      }
      col_.push_back(t.col);
      val_.push_back(t.value);
      ++row_ptr_[static_cast<std::size_t>(t.row) + 1];
      last_row = t.row;
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i)
      row_ptr_[i + 1] += row_ptr_[i];
  }

  int dim() const { return dim_; }
  std::size_t nnz() const { return col_.size(); }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_index() const { return col_; }
  const std::vector<double>& values() const { return val_; }

  double at(int i, int j) const {
    auto b = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(i)]);
    auto e = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(i) + 1]);
    auto it = std::lower_bound(b, e, j);
    if (it == e || *it != j) return 0.0;
    return val_[static_cast<std::size_t>(it - col_.begin())];
  }

  /// this * x for a dense n x m matrix x, O(nnz * m).
  Matrix multiply(const Matrix& x) const {
    if (x.rows() != dim_)
      throw InputError("sparse multiply: operand has " + std::to_string(x.rows()) +
                       " rows, expected " + std::to_string(dim_));
    Matrix out = Matrix::Zero(dim_, x.cols());
    for (int i = 0; i < dim_; ++i) {
      for (std::size_t p = row_ptr_[static_cast<std::size_t>(i)];
           p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p)
        out.row(i) += val_[p] * x.row(col_[p]);
    }
    return out;
  }

  Matrix to_dense() const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (std::size_t p = row_ptr_[static_cast<std::size_t>(i)];
           p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p)
        out(i, col_[p]) = val_[p];
    return out;
  }

  bool is_symmetric(double tol = 1e-12) const {
    for (int i = 0; i < dim_; ++i)
      for (std::size_t p = row_ptr_[static_cast<std::size_t>(i)];
           p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p) {
        const int j = col_[p];
        auto b = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(j)]);
        auto e = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[static_cast<std::size_t>(j) + 1]);
        auto it = std::lower_bound(b, e, i);
        if (it == e || *it != i) return false;
        if (std::abs(val_[static_cast<std::size_t>(it - col_.begin())] - val_[p]) > tol) return false;
      }
    return true;
  }

 private:
  int dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
};

struct ValidationError {
  enum class Kind { out_of_range, duplicate_edge, self_loop, feature_rows, empty_features };
  Kind kind;
  std::string message;
  long index;  // offending edge index, or -1
};

/// Checks the attributed-graph invariants, returning the first violation.
inline std::optional<ValidationError> validate(int n, const std::vector<Edge>& edges,
                                               const Matrix& features) {
  using K = ValidationError::Kind;
  if (n < 0)
    return ValidationError{K::out_of_range, "negative node count", -1};
  std::set<Edge> seen;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    const auto where = "edge " + std::to_string(e) + " (" + std::to_string(u) + "," +
                       std::to_string(v) + ")";
    if (u < 0 || v < 0 || u >= n || v >= n)
      return ValidationError{K::out_of_range,
                             where + ": endpoint out of range [0," + std::to_string(n) + ")",
                             static_cast<long>(e)};
    if (u == v)
      return ValidationError{K::self_loop, where + ": self-loop on node " + std::to_string(u),
                             static_cast<long>(e)};
    if (!seen.insert(std::minmax(u, v)).second)
      return ValidationError{K::duplicate_edge, where + ": duplicate edge",
                             static_cast<long>(e)};
  }
  if (features.rows() != n)
    return ValidationError{K::feature_rows,
                           "features have " + std::to_string(features.rows()) +
                               " rows but the graph has " + std::to_string(n) + " nodes",
                           -1};
  if (features.cols() < 1)
    return ValidationError{K::empty_features, "features need at least one column", -1};
  return std::nullopt;
}

/// Undirected graph with per-node features and optional ground truth.
/// Immutable once built; the adjacency and degree vector are derived eagerly.
class AttributedGraph {
 public:
  AttributedGraph(int n, std::vector<Edge> edges, Matrix features,
                  std::optional<GroundTruth> truth = std::nullopt)
      : n_(n), edges_(std::move(edges)), features_(std::move(features)),
        truth_(std::move(truth)) {
    if (auto err = validate(n_, edges_, features_)) throw InputError(err->message);
    for (auto& e : edges_) e = std::minmax(e.first, e.second);
    degrees_.assign(static_cast<std::size_t>(n_), 0);
    std::vector<SparseSymMatrix::Triplet> t;
    t.reserve(2 * edges_.size());
    for (auto [u, v] : edges_) {
      ++degrees_[static_cast<std::size_t>(u)];
      ++degrees_[static_cast<std::size_t>(v)];
      t.push_back({u, v, 1.0});
      t.push_back({v, u, 1.0});
    }
    adjacency_ = SparseSymMatrix(n_, std::move(t));
  }

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  int feature_dim() const { return static_cast<int>(features_.cols()); }

  /// Edges with u < v, in input order.
  const std::vector<Edge>& edges() const { return edges_; }
  const Matrix& features() const { return features_; }
  const std::optional<GroundTruth>& ground_truth() const { return truth_; }
  const std::vector<int>& degree_vector() const { return degrees_; }
  const SparseSymMatrix& adjacency_matrix() const { return adjacency_; }

  AttributedGraph with_ground_truth(std::optional<GroundTruth> truth) const {
    AttributedGraph g = *this;
    g.truth_ = std::move(truth);
    return g;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  Matrix features_;
  std::optional<GroundTruth> truth_;
  std::vector<int> degrees_;
  SparseSymMatrix adjacency_;
};

inline std::optional<ValidationError> validate(const AttributedGraph& g) {
  return validate(g.num_nodes(), g.edges(), g.features());
}

inline const std::vector<int>& degrees(const AttributedGraph& g) { return g.degree_vector(); }

inline Vector degree_column(const AttributedGraph& g) {
  Vector d(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) d(i) = g.degree_vector()[static_cast<std::size_t>(i)];
  return d;
}

inline const SparseSymMatrix& adjacency(const AttributedGraph& g) { return g.adjacency_matrix(); }

/// D~^{-1/2} (A + I) D~^{-1/2}, where D~ counts the self-loop (d_i + 1).
inline SparseSymMatrix normalized_adjacency(const AttributedGraph& g) {
  const auto& d = g.degree_vector();
  std::vector<double> inv_sqrt(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(d[i] + 1.0);
  std::vector<SparseSymMatrix::Triplet> t;
  t.reserve(2 * g.num_edges() + static_cast<std::size_t>(g.num_nodes()));
  for (int i = 0; i < g.num_nodes(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    t.push_back({i, i, inv_sqrt[ii] * inv_sqrt[ii]});
  }
  for (auto [u, v] : g.edges()) {
    const double w = inv_sqrt[static_cast<std::size_t>(u)] * inv_sqrt[static_cast<std::size_t>(v)];
    t.push_back({u, v, w});
    t.push_back({v, u, w});
  }
  return SparseSymMatrix(g.num_nodes(), std::move(t));
}

}  // namespace ucode
