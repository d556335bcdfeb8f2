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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "ucode/assign.hpp"
#include "ucode/metrics.hpp"

namespace ucode {
namespace {

TEST(AssignTest, HardAssignArgmaxWithLowestTieBreak) {
  Matrix c(3, 3);
  c << 0.1, 0.7, 0.2, 0.5, 0.5, 0.0, 0.2, 0.2, 0.9;
  EXPECT_EQ(hard_assign(c).labels, (std::vector<int>{1, 0, 2}));
}

TEST(AssignTest, ThresholdIsMeanOfExp) {
  Matrix c(1, 2);
  c << 0.0, 1.0;
  EXPECT_NEAR(threshold_p1(c), (1.0 + std::exp(1.0)) / 2.0, 1e-15);
  c << 0.0, 0.0;
  EXPECT_DOUBLE_EQ(threshold_p1(c), 1.0);
}

TEST(AssignTest, OverlapIsInclusiveAndFallsBack) {
  Matrix c(3, 2);
  c << 0.0, 0.0, 1.0, 0.0, 0.2, 0.3;
  const double t = threshold_p1(c);
  const Cover cv = overlap_assign(c, t);
  // row 0 is below threshold everywhere and falls back to column 0
  EXPECT_EQ(cv.sets[0], (std::vector<int>{0, 1}));
  EXPECT_TRUE(cv.covers_all_nodes());

  Matrix flat = Matrix::Zero(2, 2);
  const Cover all = overlap_assign(flat, threshold_p1(flat));
  EXPECT_EQ(all.sets[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(all.sets[1], (std::vector<int>{0, 1}));
}

TEST(AssignTest, OverlapAlwaysCoversEveryNode) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix c = testing::random_matrix(15, 4, -2, 2, rng);
    EXPECT_TRUE(overlap_assign(c, threshold_p1(c)).covers_all_nodes());
  }
}

TEST(AssignTest, KMeansSeparatedClusters) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 0.1);
  Matrix h(60, 2);
  std::vector<int> truth;
  for (int i = 0; i < 60; ++i) {
    const int c = i % 3;
    h(i, 0) = 5.0 * c + noise(rng);
    h(i, 1) = (c == 1 ? 5.0 : 0.0) + noise(rng);
    truth.push_back(c);
  }
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    const auto r = kmeans_assign(h, 3, seed);
    EXPECT_NEAR(nmi(Partition{truth}, r.partition), 1.0, 1e-12);
    for (std::size_t i = 1; i < r.objective.size(); ++i)
      EXPECT_LE(r.objective[i], r.objective[i - 1] + 1e-9);
  }
}

TEST(AssignTest, KMeansIsSeedDeterministic) {
  std::mt19937_64 rng(3);
  const Matrix h = testing::random_matrix(40, 3, 0, 1, rng);
  const auto a = kmeans_assign(h, 4, 11), b = kmeans_assign(h, 4, 11);
  EXPECT_EQ(a.partition.labels, b.partition.labels);
  EXPECT_EQ(a.centroids, b.centroids);
}

TEST(AssignTest, KMeansEdgeCases) {
  EXPECT_THROW(kmeans_assign(Matrix::Ones(2, 2), 3, 0), InputError);
  const auto r = kmeans_assign(Matrix::Ones(5, 2), 2, 0);  // duplicate points
  EXPECT_EQ(r.partition.size(), 5u);
}

}  // namespace
}  // namespace ucode
