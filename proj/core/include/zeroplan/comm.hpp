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

#ifndef ZEROPLAN_COMM_HPP_
#define ZEROPLAN_COMM_HPP_

#include <cstdint>

#include "zeroplan/hardware.hpp"
#include "zeroplan/zero_stage.hpp"

namespace zeroplan {

// Collective accounting convention shared by the planner and the simulator.
//
// Per optimizer-synchronized step the stages move 2, 2, 2 and 3 parameter
// volumes respectively, split between the micro-step path and the
// synchronization point:
//
//   stage 0: micro-step none;                 sync gradient all-reduce (2 psi)
//   stage 1: micro-step none;                 sync all-reduce pair     (2 psi)
//   stage 2: micro-step reduce-scatter 1 psi; sync param all-gather    (1 psi)
//   stage 3: micro-step fwd all-gather + bwd all-gather + reduce-scatter
//            (1 psi each, three separate launches);  sync none
//
// All volumes are in bytes (psi scaled by bytes_per_param).

/// Total element count moved by ZeRO-3 for one feed-forward block stack:
/// 24 * d * h^2 (8dh^2 forward all-gather, 16dh^2 backward all-gather plus
/// reduce-scatter).
std::uint64_t ffn_comm_volume(std::int64_t hidden_size, std::int64_t layers);
std::uint64_t ffn_forward_volume(std::int64_t hidden_size,
                                 std::int64_t layers);
std::uint64_t ffn_backward_volume(std::int64_t hidden_size,
                                  std::int64_t layers);

/// Bytes moved per optimizer-synchronized step: (2, 2, 2, 3) * psi *
/// bytes_per_param for stages 0-3.
double stage_comm_volume(const ModelSpec& model, ZeroStage stage);

/// Bytes moved during one micro-step (0, 0, 1, 3) * psi * bytes_per_param.
double micro_step_comm_volume(const ModelSpec& model, ZeroStage stage);

/// Bytes moved at the synchronization point (2, 2, 1, 0) * psi *
/// bytes_per_param.
double sync_comm_volume(const ModelSpec& model, ZeroStage stage);

/// Flat alpha-beta cost of one collective launch: link_latency plus volume
/// over the bottleneck (minimum) bandwidth. Zero volume still pays latency.
double collective_time(double volume_bytes, const ClusterGroundTruth& cluster);

/// Wall time of the micro-step collectives (stage 3 launches three separate
/// collectives, each paying latency).
double micro_step_comm_time(const ModelSpec& model, ZeroStage stage,
                            const ClusterGroundTruth& cluster);

/// Wall time of the synchronization-point collective; stage 3 launches none
/// and costs exactly zero.
double sync_comm_time(const ModelSpec& model, ZeroStage stage,
                      const ClusterGroundTruth& cluster);

/// Bundled per-stage communication profile consumed by the planner.
struct CommProfile {
  ZeroStage stage = ZeroStage::kStage0;
  double volume_forward = 0.0;    // bytes per micro-step, forward path
  double volume_backward = 0.0;   // bytes per micro-step, backward path
  double volume_optimizer = 0.0;  // bytes at the synchronization point
  double time_per_step = 0.0;     // seconds of collectives per micro-step
  double sync_time = 0.0;         // seconds of collectives at the sync point
};

CommProfile make_comm_profile(const ModelSpec& model, ZeroStage stage,
                              const ClusterGroundTruth& cluster);

}  // namespace zeroplan

#endif  // ZEROPLAN_COMM_HPP_
