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

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ucode/community.hpp"
#include "ucode/error.hpp"
#include "ucode/graph.hpp"
#include "ucode/modularity.hpp"

namespace ucode {

/// Row-wise argmax; ties go to the lowest column.
inline Partition hard_assign(const Matrix& c) {
  Partition p;
  p.labels.resize(static_cast<std::size_t>(c.rows()));
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < c.cols(); ++j)
      if (c(i, j) > c(i, best)) best = j;
    p.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return p;
}

inline Partition hard_assign(const CommunityAssignment& c) { return hard_assign(c.matrix()); }

/// Mean of exp(c_ij) over all entries.
inline double threshold_p1(const Matrix& c) {
  if (c.size() == 0) throw InputError("threshold of an empty assignment");
  return c.array().exp().mean();
}

inline double threshold_p1(const CommunityAssignment& c) { return threshold_p1(c.matrix()); }

/// Node i joins set j iff exp(c_ij) >= threshold. Nodes that qualify for no
/// set fall back to their argmax community.
inline Cover overlap_assign(const Matrix& c, double threshold) {
  if (!(threshold > 0.0)) throw InputError("overlap threshold must be positive");
  Cover cv;
  cv.n = static_cast<std::size_t>(c.rows());
  cv.sets.resize(static_cast<std::size_t>(c.cols()));
  const Partition fallback = hard_assign(c);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    bool any = false;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (std::exp(c(i, j)) >= threshold) {
        cv.sets[static_cast<std::size_t>(j)].push_back(static_cast<int>(i));
        any = true;
      }
    }
    if (!any)
      cv.sets[static_cast<std::size_t>(fallback.labels[static_cast<std::size_t>(i)])].push_back(
          static_cast<int>(i));
  }
  return cv;
}

inline Cover overlap_assign(const CommunityAssignment& c, double threshold) {
  return overlap_assign(c.matrix(), threshold);
}

struct KMeansResult {
  Partition partition;
  Matrix centroids;                // k x m
  std::vector<double> objective;   // within-cluster sum of squares after each assignment
  int iterations = 0;
};

/// k-means++ seeding followed by Lloyd iterations until every centroid moves
/// less than `tol` or `max_iter` is reached. Empty clusters are reseeded at
/// the point farthest from its assigned centroid.
inline KMeansResult kmeans_assign(const Matrix& h, int k, std::uint64_t seed, int max_iter = 300,
                                  double tol = 1e-8) {
  const auto n = h.rows();
  if (k < 1) throw InputError("k-means needs k >= 1");
  if (n < k)
    throw InputError("k-means needs at least k points: n = " + std::to_string(n) +
                     ", k = " + std::to_string(k));
  std::mt19937_64 rng(seed);

  Matrix centroids(k, h.cols());
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centroids.row(0) = h.row(first(rng));
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dist = (h.row(i) - centroids.row(c - 1)).squaredNorm();
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], dist);
      total += d2[static_cast<std::size_t>(i)];
    }
    Eigen::Index pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      for (pick = 0; pick < n - 1; ++pick) {
        r -= d2[static_cast<std::size_t>(pick)];
        if (r <= 0.0) break;
      }
    } else {
      pick = first(rng);
    }
    centroids.row(c) = h.row(pick);
  }

  KMeansResult res;
  res.partition.labels.assign(static_cast<std::size_t>(n), 0);
  auto& labels = res.partition.labels;
  for (res.iterations = 0; res.iterations < max_iter;) {
    ++res.iterations;
    double objective = 0.0;
    std::vector<double> own(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (h.row(i) - centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double dist = (h.row(i) - centroids.row(c)).squaredNorm();
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      labels[static_cast<std::size_t>(i)] = best;
      own[static_cast<std::size_t>(i)] = best_d;
      objective += best_d;
    }
    res.objective.push_back(objective);

    Matrix next = Matrix::Zero(k, h.cols());
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      next.row(labels[static_cast<std::size_t>(i)]) += h.row(i);
      ++count[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) {
        next.row(c) /= count[static_cast<std::size_t>(c)];
        continue;
      }
      Eigen::Index far = 0;
      for (Eigen::Index i = 1; i < n; ++i)
        if (own[static_cast<std::size_t>(i)] > own[static_cast<std::size_t>(far)]) far = i;
      next.row(c) = h.row(far);
      own[static_cast<std::size_t>(far)] = 0.0;
    }
    const double shift = (next - centroids).rowwise().norm().maxCoeff();
    centroids = std::move(next);
    if (shift < tol) break;
  }
  res.centroids = std::move(centroids);
  return res;
}

}  // namespace ucode
