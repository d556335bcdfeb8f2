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

// Scores the two bowtie clusterings, runs the exhaustive oracle, then trains
// the network on the same graph.

#include <cstdio>

#include "ucode/ucode.hpp"

int main() {
  using namespace ucode;
  const AttributedGraph g = bowtie();
  const Permutation swap = Permutation::cyclic_shift(2);
  LossConfig cfg;
  cfg.perm_policy = PermPolicy::fixed_derangement;

  for (const auto& ref : bowtie_references()) {
    const Matrix q = community_modularity_matrix(g, ref.c);
    std::printf("%-12s loss %.4f  Q_M diag %.3f %.3f  off %.3f\n", ref.name.c_str(),
                loss_of_assignment(g, ref.c, cfg, swap), q(0, 0), q(1, 1), q(0, 1));
  }

  const OracleResult best = exhaustive_min(g, GridSpec{}, cfg, swap);
  std::printf("oracle: %llu assignments, min loss %.4f at %s\n",
              static_cast<unsigned long long>(best.evaluated), best.best_loss,
              encode_assignment(best.best).c_str());

  TrainConfig tc;
  tc.k = 2;
  tc.epochs = 200;
  tc.hidden = 16;
  tc.seed = 1;
  const TrainResult r = train(g, tc);
  const Partition p = hard_assign(r.assignment());
  std::printf("trained: loss %.4f -> %.4f, labels", r.history.head_mean(), r.history.tail_mean());
  for (int l : p.labels) std::printf(" %d", l);
  std::printf("\n");
  return 0;
}
