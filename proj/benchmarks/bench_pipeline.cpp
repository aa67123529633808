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

#include <utility>
#include <vector>

#include <benchmark/benchmark.h>

#include "zeroplan/comm.hpp"
#include "zeroplan/perf_curve.hpp"
#include "zeroplan/planner.hpp"
#include "zeroplan/profiler.hpp"
#include "zeroplan/simulator.hpp"

namespace {

using namespace zeroplan;

ModelSpec bench_model() {
  ModelSpec model;
  model.param_count = 5e8;
  model.hidden_size = 1024;
  model.num_layers = 8;
  return model;
}

// n devices alternating fast/slow, memory sized for the given max batch.
ClusterGroundTruth bench_cluster(int n, std::int64_t mbs,
                                 const ModelSpec& model) {
  ClusterGroundTruth cluster;
  const double resident = resident_state_bytes(model, ZeroStage::kStage0, n);
  for (int i = 0; i < n; ++i) {
    DeviceGroundTruth device;
    device.id = i;
    device.act_mem_per_batch = 1 << 24;
    device.total_mem =
        resident + device.act_mem_per_batch * static_cast<double>(mbs);
    device.compute_fixed = 0.02;
    device.compute_per_batch = (i % 2 == 0) ? 0.01 : 0.02;
    cluster.devices.push_back(device);
    cluster.link_bandwidths.push_back(12e9);
  }
  cluster.link_latency = 1e-4;
  return cluster;
}

void BM_ProfileCluster(benchmark::State& state) {
  const ModelSpec model = bench_model();
  const ClusterGroundTruth cluster =
      bench_cluster(static_cast<int>(state.range(0)), 4096, model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        profile_cluster(cluster, model, ZeroStage::kStage0));
  }
}
BENCHMARK(BM_ProfileCluster)->Arg(4)->Arg(16);

void BM_PlanZero23Sweep(benchmark::State& state) {
  const ModelSpec model = bench_model();
  const int n = 8;
  const ClusterGroundTruth cluster =
      bench_cluster(n, state.range(0), model);
  const ProfileResult profile =
      profile_cluster(cluster, model, ZeroStage::kStage3);
  const std::vector<PerfCurve> curves = build_curves(profile);
  const CommProfile comm =
      make_comm_profile(model, ZeroStage::kStage3, cluster);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        plan_zero23(state.range(0) * n * 2, curves, comm));
  }
}
BENCHMARK(BM_PlanZero23Sweep)->Arg(256)->Arg(1024)->Arg(4096);

void BM_PlanZero01(benchmark::State& state) {
  const ModelSpec model = bench_model();
  const ClusterGroundTruth cluster = bench_cluster(8, 1024, model);
  const ProfileResult profile =
      profile_cluster(cluster, model, ZeroStage::kStage0);
  const std::vector<PerfCurve> curves = build_curves(profile);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_zero01(8192, curves));
  }
}
BENCHMARK(BM_PlanZero01);

void BM_SimulateIteration(benchmark::State& state) {
  const ModelSpec model = bench_model();
  const ClusterGroundTruth cluster = bench_cluster(8, 256, model);
  const ProfileResult profile =
      profile_cluster(cluster, model, ZeroStage::kStage3);
  const AllocationPlan planned =
      plan(4096, profile, ZeroStage::kStage3, model, cluster);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_iteration(cluster, model, planned, ZeroStage::kStage3));
  }
}
BENCHMARK(BM_SimulateIteration);

}  // namespace
