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

// Generates a planted-partition graph and reports how well training recovers it.

#include <cstdio>
#include <cstdlib>

#include "ucode/ucode.hpp"

int main(int argc, char** argv) {
  using namespace ucode;
  SbmConfig sc;
  sc.seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 0;
  const SbmResult data = sbm_generate(sc);

  TrainConfig tc;
  tc.k = sc.k_planted;
  tc.epochs = 500;
  tc.seed = sc.seed;
  const TrainResult r = train(data.graph, tc);
  const Partition p = hard_assign(r.assignment());
  std::printf("seed %llu: %zu edges, NMI %.3f, modularity %.3f\n",
              static_cast<unsigned long long>(sc.seed), data.graph.num_edges(),
              nmi(data.primary, p), modularity_score(data.graph, p));
  return 0;
}
