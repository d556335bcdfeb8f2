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
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ucode/error.hpp"

namespace ucode {

/// Hard community structure: exactly one label per node.
struct Partition {
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }

  /// One past the largest label (0 for an empty partition).
  int num_communities() const {
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    return k;
  }
};

/// Overlapping community structure over nodes [0, n). Sets are kept sorted.
struct Cover {
  std::size_t n = 0;
  std::vector<std::vector<int>> sets;

  /// Membership lists per node.
  std::vector<std::vector<int>> memberships() const {
    std::vector<std::vector<int>> out(n);
    for (std::size_t s = 0; s < sets.size(); ++s)
      for (int v : sets[s]) out[static_cast<std::size_t>(v)].push_back(static_cast<int>(s));
    return out;
  }

  bool covers_all_nodes() const {
    std::vector<char> seen(n, 0);
    for (const auto& s : sets)
      for (int v : s) seen[static_cast<std::size_t>(v)] = 1;
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  }

  bool has_overlap() const {
    std::vector<int> count(n, 0);
    for (const auto& s : sets)
      for (int v : s)
        if (++count[static_cast<std::size_t>(v)] > 1) return true;
    return false;
  }

  static Cover from_partition(const Partition& p) {
    Cover c;
    c.n = p.size();
    c.sets.resize(static_cast<std::size_t>(p.num_communities()));
    for (std::size_t i = 0; i < p.size(); ++i)
      c.sets[static_cast<std::size_t>(p.labels[i])].push_back(static_cast<int>(i));
    // labels may skip ids; drop the resulting empty sets
    std::erase_if(c.sets, [](const auto& s) { return s.empty(); });
    return c;
  }
};

/// Checks that every node is in exactly one set and converts.
inline Partition to_partition(const Cover& c) {
  Partition p;
  p.labels.assign(c.n, -1);
  for (std::size_t s = 0; s < c.sets.size(); ++s) {
    for (int v : c.sets[s]) {
      auto& slot = p.labels[static_cast<std::size_t>(v)];
      if (slot != -1)
        throw InputError("cover is not a partition: node " + std::to_string(v) +
                         " is in more than one community");
      slot = static_cast<int>(s);
    }
  }
  for (std::size_t i = 0; i < p.labels.size(); ++i)
    if (p.labels[i] == -1)
      throw InputError("cover is not a partition: node " + std::to_string(i) +
                       " is in no community");
  return p;
}

using GroundTruth = std::variant<Partition, Cover>;

}  // namespace ucode
