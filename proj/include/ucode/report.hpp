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
#include <cstdio>
#include <string>

#include "json.hpp"
#include "ucode/data_io.hpp"
#include "ucode/trainer.hpp"

namespace ucode {

inline nlohmann::ordered_json report_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  for (const auto& [name, v] : r.entries) j[name] = v * r.scale;
  return j;
}

inline std::string report_table(const MetricsReport& r) {
  std::size_t width = 6;
  for (const auto& [name, v] : r.entries) width = std::max(width, name.size());
  std::string s;
  for (const auto& [name, v] : r.entries) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), r.scale == 1.0 ? "%10.6f" : "%10.2f", v * r.scale);
    s += name + std::string(width - name.size() + 2, ' ') + buf + '\n';
  }
  return s;
}

/// epoch,loss,trace_qm,modularity[,seconds]
inline std::string history_csv(const TrainHistory& h, bool with_seconds = false) {
  std::string s = "epoch,loss,trace_qm,modularity";
  s += with_seconds ? ",seconds\n" : "\n";
  for (const auto& r : h.records) {
    s += std::to_string(r.epoch) + ',' + format_double(r.loss) + ',' + format_double(r.trace_qm) +
         ',' + format_double(r.modularity);
    if (with_seconds) s += ',' + format_double(r.seconds);
    s += '\n';
  }
  return s;
}

}  // namespace ucode
