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

#include "ucode/assign.hpp"
#include "ucode/checkpoint.hpp"
#include "ucode/community.hpp"
#include "ucode/data_io.hpp"
#include "ucode/error.hpp"
#include "ucode/gcn.hpp"
#include "ucode/graph.hpp"
#include "ucode/loss.hpp"
#include "ucode/metrics.hpp"
#include "ucode/modularity.hpp"
#include "ucode/oracle.hpp"
#include "ucode/report.hpp"
#include "ucode/trainer.hpp"
