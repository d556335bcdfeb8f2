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
#include "ucode/report.hpp"
#include "ucode/trainer.hpp"

namespace ucode {
namespace {

TrainConfig small(int k, int epochs, std::uint64_t seed) {
  TrainConfig c;
  c.k = k;
  c.epochs = epochs;
  c.hidden = 16;
  c.seed = seed;
  return c;
}

TEST(TrainerTest, DeterministicGivenSeed) {
  const auto g = bowtie();
  const auto a = train(g, small(2, 50, 3)), b = train(g, small(2, 50, 3));
  EXPECT_EQ(history_csv(a.history), history_csv(b.history));
  EXPECT_EQ(a.output, b.output);
  const auto c = train(g, small(2, 50, 4));
  EXPECT_NE(history_csv(a.history), history_csv(c.history));
}

TEST(TrainerTest, BowtieLossDescends) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = train(bowtie(), small(2, 200, seed));
    EXPECT_LE(r.history.tail_mean(), r.history.head_mean()) << "seed " << seed;
    EXPECT_EQ(r.history.records.size(), 200u);
  }
}

TEST(TrainerTest, SbmRecoveryWithDefaults) {
  SbmConfig sc;
  sc.seed = 1;
  const auto data = sbm_generate(sc);
  TrainConfig tc;
  tc.k = 4;
  tc.epochs = 500;
  tc.seed = 1;
  const auto r = train(data.graph, tc);
  EXPECT_GE(nmi(data.primary, hard_assign(r.assignment())), 0.9);
  EXPECT_LE(r.history.tail_mean(), r.history.head_mean());
}

TEST(TrainerTest, VariantsRun) {
  auto cfg = small(2, 30, 0);
  cfg.amplify = true;
  EXPECT_NO_THROW(train(bowtie(), cfg));
  cfg = small(3, 30, 0);
  cfg.perm_policy = PermPolicy::fixed_derangement;
  cfg.dropout = 0.2;
  cfg.qm_normalization = QmScale::raw;
  EXPECT_NO_THROW(train(bowtie(), cfg));
}

TEST(TrainerTest, RejectsBadInput) {
  EXPECT_THROW(train(bowtie(), small(1, 10, 0)), InputError);
  AttributedGraph empty(4, {}, Matrix::Ones(4, 2));
  EXPECT_THROW(train(empty, small(2, 10, 0)), InputError);
  auto cfg = small(2, 10, 0);
  cfg.lr = 0;
  EXPECT_THROW(train(bowtie(), cfg), InputError);
}

TEST(TrainerTest, DivergenceIsReportedWithEpoch) {
  auto cfg = small(2, 50, 0);
  cfg.lr = 1e300;
  try {
    train(bowtie(), cfg);
    FAIL() << "expected a numeric failure";
  } catch (const NumericError& e) {
    EXPECT_GE(e.epoch(), 0);
  }
}

TEST(TrainerTest, EvaluateHardAndOverlap) {
  const auto g = bowtie();
  const Partition truth{{0, 0, 1, 1, 1}};
  const auto hard = evaluate(g, CommunityAssignment::one_hot(truth, 2), truth, EvalMode::hard);
  EXPECT_NEAR(*hard.get("nmi"), 100.0, 1e-9);
  EXPECT_NEAR(*hard.get("conductance"), 37.5, 1e-9);
  EXPECT_NEAR(*hard.get("modularity"), 100.0 / 9, 1e-9);

  const Cover cv = std::get<Cover>(*g.ground_truth());
  const auto ov = evaluate_prediction(&g, cv, cv, EvalMode::overlap, 1.0);
  EXPECT_NEAR(*ov.get("onmi"), 1.0, 1e-12);
  EXPECT_NEAR(*ov.get("recall"), 1.0, 1e-12);
  EXPECT_THROW(evaluate_prediction(&g, truth, cv, EvalMode::hard), InputError);
}

TEST(TrainerTest, HistoryCsvFormat) {
  TrainHistory h;
  h.records.push_back({0, 0.5, 1.0, 0.25, 3.0});
  EXPECT_EQ(history_csv(h), "epoch,loss,trace_qm,modularity\n0,0.5,1,0.25\n");
  EXPECT_EQ(history_csv(h, true), "epoch,loss,trace_qm,modularity,seconds\n0,0.5,1,0.25,3\n");
}

}  // namespace
}  // namespace ucode
