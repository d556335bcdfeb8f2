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
#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "ucode/metrics.hpp"

namespace ucode {
namespace {

Partition random_partition(int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> lab(0, k - 1);
  Partition p;
  for (int i = 0; i < n; ++i) p.labels.push_back(lab(rng));
  return p;
}

Cover random_cover(int n, int sets, std::mt19937_64& rng) {
  std::bernoulli_distribution in(0.35);
  Cover c;
  c.n = static_cast<std::size_t>(n);
  for (int s = 0; s < sets; ++s) {
    std::vector<int> set;
    for (int v = 0; v < n; ++v)
      if (in(rng)) set.push_back(v);
    if (set.empty()) set.push_back(s % n);
    c.sets.push_back(set);
  }
  return c;
}

Partition relabel(const Partition& p, int shift, int k) {
  Partition out = p;
  for (auto& l : out.labels) l = (l + shift) % k;
  return out;
}

TEST(MetricsTest, PairwiseF1Fixture) {
  EXPECT_NEAR(pairwise_f1(Partition{{0, 0, 1, 1}}, Partition{{0, 0, 0, 1}}), 0.4, 1e-10);
  EXPECT_EQ(pairwise_f1(Partition{{0, 1, 2}}, Partition{{0, 1, 2}}), 0.0);
}

TEST(MetricsTest, NmiFixtures) {
  EXPECT_DOUBLE_EQ(nmi(Partition{{0, 0, 1, 1}}, Partition{{1, 1, 0, 0}}), 1.0);
  EXPECT_NEAR(nmi(Partition{{0, 0, 1, 1}}, Partition{{0, 1, 0, 1}}), 0.0, 1e-12);
  EXPECT_EQ(nmi(Partition{{0, 0, 0}}, Partition{{0, 0, 0}}), 1.0);
  EXPECT_EQ(nmi(Partition{{0, 0, 0}}, Partition{{0, 1, 1}}), 0.0);
  EXPECT_THROW(nmi(Partition{{0}}, Partition{{0, 1}}), InputError);
}

TEST(MetricsTest, IdentityAndPermutationInvariance) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + trial, k = 2 + trial % 4;
    const auto a = random_partition(n, k, rng), b = random_partition(n, k, rng);
    if (a.num_communities() > 1) {
      EXPECT_NEAR(nmi(a, a), 1.0, 1e-12);
      EXPECT_NEAR(pairwise_f1(a, a), 1.0, 1e-12);
    }
    const auto b2 = relabel(b, 1, k), a2 = relabel(a, 2, k);
    EXPECT_NEAR(nmi(a, b), nmi(a2, b2), 1e-12);
    EXPECT_NEAR(nmi(a, b), nmi(b, a), 1e-12);
    EXPECT_NEAR(pairwise_f1(a, b), pairwise_f1(a2, b2), 1e-12);
    EXPECT_NEAR(pairwise_f1(a, b), testing::pair_enumeration_f1(a.labels, b.labels), 1e-12);
    const double v = nmi(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(MetricsTest, OnmiIdentityAndSetOrder) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_cover(10, 3, rng);
    EXPECT_NEAR(onmi(a, a), 1.0, 1e-12);
    Cover shuffled = a;
    std::reverse(shuffled.sets.begin(), shuffled.sets.end());
    const auto b = random_cover(10, 4, rng);
    EXPECT_NEAR(onmi(a, b), onmi(shuffled, b), 1e-12);
    EXPECT_NEAR(onmi(a, b), onmi(b, a), 1e-12);
    EXPECT_NEAR(pairwise_f1(a, a), 1.0, 1e-12);
  }
}

TEST(MetricsTest, OnmiMatchesBruteForce) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 8;
    const auto a = random_cover(n, 1 + trial % 4, rng), b = random_cover(n, 1 + trial % 3, rng);
    const double expected = std::clamp(testing::brute_force_onmi(a.n, a.sets, b.sets), 0.0, 1.0);
    EXPECT_NEAR(onmi(a, b), expected, 1e-6) << "trial " << trial;
  }
}

TEST(MetricsTest, PartitionsAsCoversAgreeOnF1) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_partition(12, 3, rng), b = random_partition(12, 4, rng);
    EXPECT_NEAR(pairwise_f1(a, b), pairwise_f1(Cover::from_partition(a), Cover::from_partition(b)),
                1e-12);
  }
}

TEST(MetricsTest, RecallBestMatch) {
  Cover truth{5, {{0, 1, 2}, {2, 3, 4}}};
  Cover pred{5, {{0, 1}, {2, 3, 4}}};
  EXPECT_NEAR(recall_best_match(truth, pred), (2.0 / 3 + 1.0) / 2, 1e-12);
  EXPECT_EQ(recall_best_match(truth, truth), 1.0);
  EXPECT_THROW(recall_best_match(truth, Cover{4, {{0}}}), InputError);
}

}  // namespace
}  // namespace ucode
