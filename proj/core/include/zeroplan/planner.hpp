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

#ifndef ZEROPLAN_PLANNER_HPP_
#define ZEROPLAN_PLANNER_HPP_

#include <cstdint>
#include <vector>

#include "zeroplan/comm.hpp"
#include "zeroplan/hardware.hpp"
#include "zeroplan/perf_curve.hpp"
#include "zeroplan/profiler.hpp"
#include "zeroplan/zero_stage.hpp"

namespace zeroplan {

/// Iteration time, idle time, and under-utilization per device.
struct PlanMetrics {
  double iteration_time = 0.0;            // T = max_i t_i
  std::vector<double> idle;               // delta t_i = T - t_i
  std::vector<double> under_utilization;  // u_i = delta t_i * p_i
  double objective = 0.0;                 // sum_i u_i
};

/// T, idle, u and the objective from per-device finish times and capability
/// weights (peak speeds).
PlanMetrics compute_plan_metrics(const std::vector<double>& finish_times,
                                 const std::vector<double>& weights);

/// Per-device slice of an allocation plan.
struct DeviceAllocation {
  int device_id = 0;
  std::int64_t b = 0;     // batch per accumulation/micro step
  std::int64_t gmbs = 0;  // total batches this device runs per iteration
  std::int64_t lbs = 0;   // batch of the final accumulation step
  double predicted_time = 0.0;  // predicted compute seconds per iteration
};

struct AllocationPlan {
  ZeroStage stage = ZeroStage::kStage0;
  std::int64_t gbs = 0;
  std::vector<DeviceAllocation> devices;
  // Stages 2/3: the global number of synchronized micro-steps. Stages 0/1:
  // the longest per-device accumulation loop (see device_gas).
  std::int64_t gas = 1;
  PlanMetrics metrics;               // over predicted per-device compute
  std::vector<double> weights;       // p_i used in the metrics
  double predicted_wall_time = 0.0;  // compute + collectives + optimizer

  /// Accumulation steps device i runs: ceil(gmbs_i / b_i), 0 when idle.
  std::int64_t device_gas(std::size_t i) const;
  std::int64_t total_assigned() const;
};

/// Distributes batch_remain leftover batches one at a time, each round to
/// the device with the greatest current under-utilization
/// (time_optimal * speed_i - gmbs_i), ties to the lowest device index.
std::vector<std::int64_t> allocate_remainder(std::vector<std::int64_t> gmbs,
                                             const std::vector<PerfCurve>& curves,
                                             std::int64_t batch_remain);

/// ZeRO-0/1 branch: speed-proportional gmbs split plus remainder rounds;
/// per-device step batches chosen inside the peak range.
AllocationPlan plan_zero01(std::int64_t gbs,
                           const std::vector<PerfCurve>& curves);

/// ZeRO-2/3 branch: sweeps candidate per-step times t over an even grid
/// joined with every per-device step-time knot, ranks candidates by
/// (t + comm per step) * gas, and scales the final micro-step down so totals
/// hit gbs exactly.
AllocationPlan plan_zero23(std::int64_t gbs,
                           const std::vector<PerfCurve>& curves,
                           const CommProfile& comm);

/// Builds curves from a profile, dispatches on the stage, and attaches the
/// communication and optimizer overheads to the predicted wall time.
AllocationPlan plan(std::int64_t gbs, const ProfileResult& profile,
                    ZeroStage stage, const ModelSpec& model,
                    const ClusterGroundTruth& cluster);

/// Heterogeneity-blind baseline: equal per-device totals (stages 0/1) or one
/// common step batch bounded by the smallest device (stages 2/3).
AllocationPlan make_uniform_plan(std::int64_t gbs,
                                 const std::vector<PerfCurve>& curves,
                                 ZeroStage stage, const CommProfile& comm,
                                 double optimizer_tail);

/// Adds the synchronization-point collective and the lockstep optimizer tail
/// to a branch plan's predicted wall time.
void attach_overheads(AllocationPlan& plan, const CommProfile& comm,
                      double optimizer_tail);

}  // namespace zeroplan

#endif  // ZEROPLAN_PLANNER_HPP_
