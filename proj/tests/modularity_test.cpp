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

#include <algorithm>
#include <numeric>
#include <random>

#include "support/oracles.hpp"
#include "ucode/data_io.hpp"
#include "ucode/modularity.hpp"

namespace ucode {
namespace {

Matrix bowtie_hard() {
  Matrix c(5, 2);
  c << 1, 0, 1, 0, 0, 1, 0, 1, 0, 1;
  return c;
}

Matrix bowtie_shared() {
  Matrix c(5, 2);
  c << 1, 0, 1, 0, 0.5, 0.5, 0, 1, 0, 1;
  return c;
}

TEST(ModularityTest, BowtieCommunityMatrix) {
  const auto g = bowtie();
  Matrix expected(2, 2);
  expected << 2.0 / 3, -2.0 / 3, -2.0 / 3, 2.0 / 3;
  EXPECT_TRUE(community_modularity_matrix(g, bowtie_hard()).isApprox(expected, 1e-12));

  expected << 1, -1, -1, 1;
  EXPECT_TRUE(community_modularity_matrix(g, bowtie_shared()).isApprox(expected, 1e-12));
}

TEST(ModularityTest, AllOnesColumnHasZeroRowAndColumn) {
  const auto g = bowtie();
  Matrix c = Matrix::Zero(5, 2);
  c.col(0).setOnes();
  const Matrix q = community_modularity_matrix(g, c);
  EXPECT_NEAR(q(0, 0), 0.0, 1e-10);
  EXPECT_NEAR(q(0, 1), 0.0, 1e-10);
  EXPECT_NEAR(q(1, 0), 0.0, 1e-10);
  EXPECT_EQ(modularity_score(g, c), 0.0);
  EXPECT_EQ(modularity_score(g, c, ModularityNorm::paper_quarter), 0.0);
}

TEST(ModularityTest, BowtieScores) {
  const auto g = bowtie();
  EXPECT_NEAR(modularity_score(g, bowtie_hard(), ModularityNorm::standard_half), 4.0 / 36, 1e-12);
  EXPECT_NEAR(modularity_score(g, bowtie_hard(), ModularityNorm::paper_quarter), 2.0 / 36, 1e-12);
  EXPECT_NEAR(modularity_score(g, Partition{{0, 0, 1, 1, 1}}), 4.0 / 36, 1e-12);
}

TEST(ModularityTest, ZeroEdgeGraphIsAnError) {
  AttributedGraph g(3, {}, Matrix::Ones(3, 1));
  EXPECT_THROW(community_modularity_matrix(g, Matrix::Ones(3, 2)), InputError);
}

TEST(ModularityTest, AssignmentRangeIsChecked) {
  EXPECT_THROW(CommunityAssignment(Matrix::Constant(2, 2, 1.5)), InputError);
  EXPECT_THROW(CommunityAssignment(Matrix::Ones(2, 1)), InputError);
  EXPECT_NO_THROW(CommunityAssignment::clamped(Matrix::Constant(2, 2, -3.0)));
}

TEST(ModularityTest, BowtieConductance) {
  const auto r = conductance(bowtie(), Partition{{0, 0, 1, 1, 1}});
  EXPECT_NEAR(r.per_community[0], 0.5, 1e-12);
  EXPECT_NEAR(r.per_community[1], 0.25, 1e-12);
  EXPECT_NEAR(r.mean, 0.375, 1e-12);
  EXPECT_EQ(conductance(bowtie(), Partition{{0, 0, 0, 0, 0}}).mean, 0.0);
}

TEST(ModularityTest, ConductanceSkipsEmptyAndFlagsZeroVolume) {
  AttributedGraph g(4, {{0, 1}}, Matrix::Ones(4, 1));
  const auto r = conductance(g, Partition{{0, 0, 2, 2}});
  EXPECT_EQ(r.zero_volume, std::vector<int>{2});
  EXPECT_EQ(r.per_community[2], 0.0);
  EXPECT_EQ(r.mean, 0.0);  // {0,1} has no cut, {2,3} has no volume
}

TEST(ModularityTest, FactoredFormMatchesDenseOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 28;
    const int k = 2 + trial % 4;
    const auto edges = testing::random_edges(n, 0.25, rng);
    AttributedGraph g(n, edges, Matrix::Ones(n, 1));
    const Matrix c = testing::random_matrix(n, k, 0.0, 1.0, rng);
    const Matrix dense = c.transpose() * testing::dense_modularity_matrix(n, edges) * c;
    const Matrix q = community_modularity_matrix(g, c);
    EXPECT_LT((q - dense).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((q - q.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ModularityTest, TraceIsInvariantUnderColumnPermutation) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10, k = 4;
    AttributedGraph g(n, testing::random_edges(n, 0.4, rng), Matrix::Ones(n, 1));
    const Matrix c = testing::random_matrix(n, k, 0.0, 1.0, rng);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix cp(n, k);
    for (int j = 0; j < k; ++j) cp.col(j) = c.col(perm[static_cast<std::size_t>(j)]);
    const Matrix q = community_modularity_matrix(g, c), qp = community_modularity_matrix(g, cp);
    EXPECT_NEAR(q.trace(), qp.trace(), 1e-12);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        EXPECT_NEAR(qp(a, b), q(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]), 1e-12);
  }
}

TEST(ModularityTest, HardPartitionMatchesPerCommunityFormula) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 12, k = 3;
    const auto edges = testing::random_edges(n, 0.3, rng);
    AttributedGraph g(n, edges, Matrix::Ones(n, 1));
    std::uniform_int_distribution<int> lab(0, k - 1);
    Partition p;
    for (int i = 0; i < n; ++i) p.labels.push_back(lab(rng));
    EXPECT_NEAR(modularity_score(g, p), testing::per_community_modularity(n, edges, p.labels), 1e-10);
    // disjoint binary columns covering every node: B sums to zero
    const Matrix q = community_modularity_matrix(g, CommunityAssignment::one_hot(p, k));
    EXPECT_NEAR(q.sum(), 0.0, 1e-8);
  }
}

}  // namespace
}  // namespace ucode
