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

#include "zeroplan/simulator.hpp"

#include <algorithm>
#include <string>

#include "zeroplan/comm.hpp"
#include "zeroplan/error.hpp"
#include "zeroplan/profiler.hpp"

namespace zeroplan {

namespace {

// Compute seconds for one step of `batch` on one device, via the same
// run_step path the profiler uses (so jitter and OOM behave identically).
double step_compute(const ClusterGroundTruth& cluster, int device_id,
                    const ModelSpec& model, std::int64_t batch,
                    ZeroStage stage, std::uint64_t noise_index) {
  const auto trace =
      run_step(cluster, device_id, model, batch, stage, noise_index);
  if (!trace) {
    throw InternalError("plan exceeds device capacity: device " +
                        std::to_string(device_id) + " OOMs at batch " +
                        std::to_string(batch));
  }
  return time_consumed_during_step(*trace, stage);
}

std::uint64_t noise_for(std::uint64_t iteration, std::int64_t step) {
  return (iteration << 24) ^ static_cast<std::uint64_t>(step + 1);
}

}  // namespace

IterationReport simulate_iteration(const ClusterGroundTruth& cluster,
                                   const ModelSpec& model,
                                   const AllocationPlan& plan, ZeroStage stage,
                                   std::uint64_t iteration_index) {
  if (plan.stage != stage) {
    throw InvalidInputError("plan stage does not match the requested stage");
  }
  const std::size_t n = cluster.devices.size();
  if (plan.devices.size() != n) {
    throw InvalidInputError("plan does not match the cluster device count");
  }

  IterationReport report;
  report.compute.assign(n, 0.0);

  const bool micro_synced =
      stage == ZeroStage::kStage2 || stage == ZeroStage::kStage3;
  if (micro_synced) {
    for (std::size_t i = 0; i < n; ++i) {
      const DeviceAllocation& dev = plan.devices[i];
      for (std::int64_t step = 0; step < plan.gas; ++step) {
        const std::int64_t batch = (step + 1 < plan.gas) ? dev.b : dev.lbs;
        if (batch == 0) continue;
        report.compute[i] += step_compute(cluster, static_cast<int>(i), model,
                                          batch, stage,
                                          noise_for(iteration_index, step));
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const DeviceAllocation& dev = plan.devices[i];
      const std::int64_t steps = plan.device_gas(i);
      for (std::int64_t step = 0; step < steps; ++step) {
        const std::int64_t batch = (step + 1 < steps) ? dev.b : dev.lbs;
        if (batch == 0) continue;
        report.compute[i] += step_compute(cluster, static_cast<int>(i), model,
                                          batch, stage,
                                          noise_for(iteration_index, step));
      }
    }
  }

  // Every device participates in every collective and the optimizer runs in
  // lockstep, so communication and the optimizer tail charge uniformly.
  const double comm_time =
      micro_synced ? static_cast<double>(plan.gas) *
                             micro_step_comm_time(model, stage, cluster) +
                         sync_comm_time(model, stage, cluster)
                   : sync_comm_time(model, stage, cluster);
  double optimizer_tail = 0.0;
  for (const DeviceGroundTruth& device : cluster.devices) {
    optimizer_tail = std::max(optimizer_tail, device.optimizer_time);
  }

  report.comm_total = comm_time;
  report.busy.resize(n);
  report.idle.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    report.busy[i] = report.compute[i] + comm_time + optimizer_tail;
    report.iteration_time = std::max(report.iteration_time, report.busy[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    report.idle[i] = report.iteration_time - report.busy[i];
  }
  report.throughput =
      static_cast<double>(plan.total_assigned()) / report.iteration_time;
  return report;
}

SimReport simulate_run(const ClusterGroundTruth& cluster,
                       const ModelSpec& model, const AllocationPlan& plan,
                       ZeroStage stage, int iterations) {
  if (iterations < 1) {
    throw InvalidInputError("iterations must be >= 1");
  }
  const std::size_t n = cluster.devices.size();
  SimReport sim;
  sim.iterations = iterations;
  if (cluster.jitter <= 0.0) {
    // Jitter-free iterations are bit-identical, so one run is the mean.
    sim.mean = simulate_iteration(cluster, model, plan, stage, 0);
    return sim;
  }
  sim.mean.busy.assign(n, 0.0);
  sim.mean.idle.assign(n, 0.0);
  sim.mean.compute.assign(n, 0.0);
  for (int it = 0; it < iterations; ++it) {
    const IterationReport report = simulate_iteration(
        cluster, model, plan, stage, static_cast<std::uint64_t>(it));
    sim.mean.iteration_time += report.iteration_time;
    sim.mean.comm_total += report.comm_total;
    sim.mean.throughput += report.throughput;
    for (std::size_t i = 0; i < n; ++i) {
      sim.mean.busy[i] += report.busy[i];
      sim.mean.idle[i] += report.idle[i];
      sim.mean.compute[i] += report.compute[i];
    }
  }
  const double scale = 1.0 / static_cast<double>(iterations);
  sim.mean.iteration_time *= scale;
  sim.mean.comm_total *= scale;
  sim.mean.throughput *= scale;
  for (std::size_t i = 0; i < n; ++i) {
    sim.mean.busy[i] *= scale;
    sim.mean.idle[i] *= scale;
    sim.mean.compute[i] *= scale;
  }
  return sim;
}

double compare_plans(const ClusterGroundTruth& cluster, const ModelSpec& model,
                     ZeroStage stage, const AllocationPlan& plan_a,
                     const AllocationPlan& plan_b, int iterations) {
  const SimReport a = simulate_run(cluster, model, plan_a, stage, iterations);
  const SimReport b = simulate_run(cluster, model, plan_b, stage, iterations);
  return a.mean.throughput / b.mean.throughput;
}

}  // namespace zeroplan
