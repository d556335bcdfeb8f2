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

// Versioned JSON container for model parameters.

#include <cstdint>
#include <string>

#include "json.hpp"
#include "ucode/error.hpp"
#include "ucode/gcn.hpp"

namespace ucode {

inline constexpr const char* kCheckpointFormat = "ucode-checkpoint";
inline constexpr int kCheckpointVersion = 1;

namespace ckpt_detail {

inline nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw InputError("checkpoint matrix has " + std::to_string(data.size()) + " values, expected " +
                     std::to_string(rows * cols));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = data[static_cast<std::size_t>(i * cols + c)].get<double>();
  return m;
}

inline nlohmann::json vector_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Vector vector_from(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline nlohmann::json bn_json(const BatchNormParams& b) {
  return {{"gamma", vector_json(b.gamma)},
          {"beta", vector_json(b.beta)},
          {"running_mean", vector_json(b.running_mean)},
          {"running_var", vector_json(b.running_var)}};
}

inline BatchNormParams bn_from(const nlohmann::json& j) {
  return {vector_from(j.at("gamma")), vector_from(j.at("beta")), vector_from(j.at("running_mean")),
          vector_from(j.at("running_var"))};
}

}  // namespace ckpt_detail

inline nlohmann::json checkpoint_json(const ModelParams& p, std::uint64_t seed) {
  using namespace ckpt_detail;
  return {{"format", kCheckpointFormat},
          {"version", kCheckpointVersion},
          {"seed", seed},
          {"shapes", {{"l", p.input_dim()}, {"h", p.hidden_dim()}, {"k", p.output_dim()}}},
          {"w0", matrix_json(p.w0)},
          {"w1", matrix_json(p.w1)},
          {"bn0", bn_json(p.bn0)},
          {"bn1", bn_json(p.bn1)}};
}

struct Checkpoint {
  ModelParams params;
  std::uint64_t seed = 0;
};

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  using namespace ckpt_detail;
  try {
    if (j.at("format").get<std::string>() != kCheckpointFormat)
      throw InputError("not a checkpoint file");
    if (j.at("version").get<int>() != kCheckpointVersion)
      throw InputError("unsupported checkpoint version " + j.at("version").dump());
    Checkpoint c;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.params.w0 = matrix_from(j.at("w0"));
    c.params.w1 = matrix_from(j.at("w1"));
    c.params.bn0 = bn_from(j.at("bn0"));
    c.params.bn1 = bn_from(j.at("bn1"));
    const auto& s = j.at("shapes");
    if (c.params.input_dim() != s.at("l").get<int>() ||
        c.params.hidden_dim() != s.at("h").get<int>() ||
        c.params.output_dim() != s.at("k").get<int>() ||
        c.params.w1.rows() != c.params.w0.cols() ||
        c.params.bn0.gamma.size() != c.params.w0.cols() ||
        c.params.bn1.gamma.size() != c.params.w1.cols())
      throw InputError("checkpoint shapes are inconsistent");
    if (!c.params.all_finite()) throw InputError("checkpoint contains non-finite values");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed checkpoint: ") + e.what());
  }
}

}  // namespace ucode
