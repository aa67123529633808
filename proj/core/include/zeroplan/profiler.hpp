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

#ifndef ZEROPLAN_PROFILER_HPP_
#define ZEROPLAN_PROFILER_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "zeroplan/hardware.hpp"
#include "zeroplan/zero_stage.hpp"

namespace zeroplan {

/// One timing sample: compute seconds for one step of the given batch size
/// (collective time already excluded per the stage's accounting rule).
struct BatchSample {
  std::int64_t batch = 0;
  double time = 0.0;
};

/// Per-device profiling outcome.
struct DeviceProfile {
  int device_id = 0;
  std::int64_t mbs = 0;  // max batch size that does not OOM
  std::vector<BatchSample> samples;  // distinct batch sizes, ascending
  int probes_used = 0;   // run_step invocations spent on this device
  double optimizer_time = 0.0;  // observed optimizer step seconds
};

struct ProfileResult {
  ZeroStage effective_stage = ZeroStage::kStage0;
  std::vector<DeviceProfile> devices;
};

struct SearchResult {
  std::int64_t mbs = 0;
  std::vector<BatchSample> samples;
  int probes_used = 0;
  double optimizer_time = 0.0;
};

/// Compute seconds attributable to the device itself during one step:
/// forward + backward compute, with the stage's collectives subtracted from
/// the step's wall path (stage 2 excludes the reduce-scatter; stage 3
/// excludes both all-gathers and the reduce-scatter). Throws InternalError
/// if the subtraction goes negative.
double time_consumed_during_step(const StepTrace& trace, ZeroStage stage);

/// Theoretical max batch size from a single batch-1 memory probe:
/// floor((total - before_forward) / activation slope). Returns nullopt when
/// batch size 1 does not fit (stage escalation needed).
std::optional<std::int64_t> estimate_theoretical_mbs(
    const ClusterGroundTruth& cluster, int device_id, const ModelSpec& model,
    ZeroStage stage);

/// Finds the exact max batch size at or below mbs_estimate: exponential
/// probing 1, 2, 4, ... capped at the estimate, then on OOM at b a binary
/// search over [last success, b). Every successful probe contributes a
/// timing sample. Uses at most 2*ceil(log2(mbs)) + 4 probes.
SearchResult search_mbs(const ClusterGroundTruth& cluster, int device_id,
                        const ModelSpec& model, ZeroStage stage,
                        std::int64_t mbs_estimate);

/// Profiles every device at the requested stage (nullopt = auto, starting at
/// stage 0). If any device cannot fit a single batch, the stage escalates
/// and profiling restarts; throws InfeasibleError if stage 3 still does not
/// fit somewhere.
ProfileResult profile_cluster(const ClusterGroundTruth& cluster,
                              const ModelSpec& model,
                              std::optional<ZeroStage> stage_request);

}  // namespace zeroplan

#endif  // ZEROPLAN_PROFILER_HPP_
