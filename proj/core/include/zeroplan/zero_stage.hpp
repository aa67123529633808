// Copyright 2026 The zeroplan Authors
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

#ifndef ZEROPLAN_ZERO_STAGE_HPP_
#define ZEROPLAN_ZERO_STAGE_HPP_

#include <string>

#include "zeroplan/error.hpp"

namespace zeroplan {

/// ZeRO sharding stage. Stage 0 replicates all model state on every device;
/// stage 1 shards optimizer states, stage 2 additionally shards gradients,
/// stage 3 shards parameters as well.
enum class ZeroStage : int {
  kStage0 = 0,
  kStage1 = 1,
  kStage2 = 2,
  kStage3 = 3,
};

inline int stage_index(ZeroStage stage) { return static_cast<int>(stage); }

inline ZeroStage stage_from_index(int value) {
  if (value < 0 || value > 3) {
    throw InvalidInputError("stage: must be 0, 1, 2 or 3, got " +
                            std::to_string(value));
  }
  return static_cast<ZeroStage>(value);
}

inline bool shards_gradients(ZeroStage stage) {
  return stage_index(stage) >= 2;
}

inline bool shards_parameters(ZeroStage stage) {
  return stage == ZeroStage::kStage3;
}

}  // namespace zeroplan

#endif  // ZEROPLAN_ZERO_STAGE_HPP_
