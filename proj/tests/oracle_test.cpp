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

#include "ucode/data_io.hpp"
#include "ucode/oracle.hpp"

namespace ucode {
namespace {

const Permutation kSwap = Permutation::cyclic_shift(2);

LossConfig fixed(double delta = 0.0, bool amplify = false) {
  LossConfig c;
  c.delta = delta;
  c.amplify = amplify;
  c.perm_policy = PermPolicy::fixed_derangement;
  return c;
}

TEST(OracleTest, BowtieArgminIsTheOverlappingClustering) {
  const auto g = bowtie();
  OracleOptions opts;
  opts.threads = 2;
  const auto r = exhaustive_min(g, GridSpec{}, fixed(), kSwap, opts);
  const auto refs = bowtie_references();
  EXPECT_TRUE(same_up_to_column_permutation(r.best, refs[1].c));
  EXPECT_TRUE(r.ranked.front().overlapping);
  EXPECT_NEAR(r.best_loss, 0.3132616875182228, 1e-12);
  // 3^10 minus the assignments with an all-zero column
  EXPECT_EQ(r.evaluated, 59049u - 2u * 243u + 1u);
  for (const auto& ref : refs)
    EXPECT_LE(r.best_loss, loss_of_assignment(g, ref.c, fixed(), kSwap));
  EXPECT_LE(r.best_loss, loss_of_assignment(g, Matrix::Constant(5, 2, 0.5), fixed(), kSwap));
}

TEST(OracleTest, ThreadCountDoesNotChangeResult) {
  const auto g = bowtie();
  OracleOptions one, many;
  one.threads = 1;
  many.threads = 5;
  const auto a = exhaustive_min(g, GridSpec{}, fixed(0.85), kSwap, one);
  const auto b = exhaustive_min(g, GridSpec{}, fixed(0.85), kSwap, many);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.best_loss, b.best_loss);
  ASSERT_EQ(a.ranked.size(), b.ranked.size());
  for (std::size_t i = 0; i < a.ranked.size(); ++i) EXPECT_EQ(a.ranked[i].c, b.ranked[i].c);
}

TEST(OracleTest, TriangleMinimumIsLogTwoWithConstantColumns) {
  const auto g = triangle();
  const auto r = exhaustive_min(g, GridSpec{}, fixed(), kSwap);
  EXPECT_NEAR(r.best_loss, std::log(2.0), 1e-12);
  for (Eigen::Index j = 0; j < 2; ++j)
    EXPECT_EQ(r.best.col(j).maxCoeff(), r.best.col(j).minCoeff());
}

TEST(OracleTest, BudgetAndSizeLimits) {
  GridSpec grid;
  OracleOptions opts;
  opts.budget = 1000;
  EXPECT_THROW(exhaustive_min(bowtie(), grid, fixed(), kSwap, opts), InputError);
  AttributedGraph big(20, {{0, 1}}, Matrix::Ones(20, 1));
  EXPECT_THROW(exhaustive_min(big, grid, fixed(), kSwap), InputError);
  grid.levels = {0.0, 0.5};
  EXPECT_THROW(exhaustive_min(bowtie(), grid, fixed(), kSwap), InputError);
}

TEST(OracleTest, SweepPreservesOrderingEverywhere) {
  const auto refs = bowtie_references();
  OracleOptions opts;
  opts.threads = 2;
  const auto rows = config_sweep(bowtie(), GridSpec{}, kSwap, refs, 0.005, opts);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& row : rows) {
    EXPECT_GT(row.reference_losses[0], row.reference_losses[1])
        << "delta " << row.delta << " amplify " << row.amplify;
    EXPECT_LE(row.argmin_loss, row.reference_losses[1]);
    EXPECT_FALSE(row.matches_expected);  // no expected values given
  }
  EXPECT_NEAR(rows[2].reference_losses[0], 0.23826279993994143, 1e-12);
  const auto csv = format_sweep_csv(rows, refs);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "delta,amplify,loss_disjoint,loss_overlapping,argmin_loss,argmin_overlapping,"
            "matches_expected,argmin");
}

TEST(OracleTest, Encoding) {
  Matrix c(2, 2);
  c << 1, 0, 0.5, 1;
  EXPECT_EQ(encode_assignment(c), "1;0.5|0;1");
  EXPECT_TRUE(is_overlapping(c));
  EXPECT_FALSE(is_overlapping(Matrix::Identity(2, 2)));
}

}  // namespace
}  // namespace ucode
