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

#ifndef ZEROPLAN_SIMULATOR_HPP_
#define ZEROPLAN_SIMULATOR_HPP_

#include <cstdint>
#include <vector>

#include "zeroplan/hardware.hpp"
#include "zeroplan/planner.hpp"
#include "zeroplan/zero_stage.hpp"

namespace zeroplan {

/// Realized timings of one training iteration. Collective participation and
/// the optimizer tail are lockstep (identical across devices), so
/// T = max_i busy_i holds exactly and idle isolates compute heterogeneity:
/// idle_i = T - busy_i = max_j compute_j - compute_i.
struct IterationReport {
  double iteration_time = 0.0;     // T
  std::vector<double> busy;        // compute_i + collectives + optimizer tail
  std::vector<double> idle;        // T - busy_i
  std::vector<double> compute;     // the device's own step compute
  double comm_total = 0.0;         // collective seconds charged per iteration
  double throughput = 0.0;         // gbs / T, batches per second
};

struct SimReport {
  int iterations = 0;
  IterationReport mean;
  double speedup_vs_baseline = 1.0;
};

/// Executes one iteration of the plan against ground truth. Throws
/// InternalError if the plan requests a batch its device cannot hold (a
/// planner/profiler bug, not an input error).
IterationReport simulate_iteration(const ClusterGroundTruth& cluster,
                                   const ModelSpec& model,
                                   const AllocationPlan& plan, ZeroStage stage,
                                   std::uint64_t iteration_index = 0);

/// Averages `iterations` simulated iterations; jitter-free runs have zero
/// variance, so the mean equals any single iteration.
SimReport simulate_run(const ClusterGroundTruth& cluster,
                       const ModelSpec& model, const AllocationPlan& plan,
                       ZeroStage stage, int iterations);

/// Mean-throughput ratio of plan_a over plan_b (> 1 means a is faster).
double compare_plans(const ClusterGroundTruth& cluster, const ModelSpec& model,
                     ZeroStage stage, const AllocationPlan& plan_a,
                     const AllocationPlan& plan_b, int iterations);

}  // namespace zeroplan

#endif  // ZEROPLAN_SIMULATOR_HPP_
