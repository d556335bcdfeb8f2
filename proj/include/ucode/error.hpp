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

#include <stdexcept>
#include <string>

namespace ucode {

/// Malformed or inconsistent input: bad files, invariant violations,
/// shape mismatches. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric failure during optimization (non-finite loss, etc.).
/// The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, long epoch = -1)
      : std::runtime_error(what), epoch_(epoch) {}

  long epoch() const noexcept { return epoch_; }

 private:
  long epoch_;
};

}  // namespace ucode
