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

#include <cmath>
#include <random>

#include <doctest.h>

#include "zeroplan/comm.hpp"
#include "zeroplan/error.hpp"
#include "zeroplan/perf_curve.hpp"
#include "zeroplan/planner.hpp"
#include "zeroplan/profiler.hpp"

namespace {

using namespace zeroplan;

ModelSpec tiny_model(double params = 1e6) {
  ModelSpec model;
  model.param_count = params;
  model.hidden_size = 64;
  model.num_layers = 2;
  return model;
}

// Cluster with the given per-device (c0, c1); memory sized for mbs 32 at
// every stage's stage-0 resident footprint.
ClusterGroundTruth make_cluster(const std::vector<std::pair<double, double>>& cs,
                                const ModelSpec& model, double bandwidth = 1e9,
                                double latency = 0.0) {
  ClusterGroundTruth cluster;
  const double resident = resident_state_bytes(
      model, ZeroStage::kStage0, static_cast<int>(cs.size()));
  for (std::size_t i = 0; i < cs.size(); ++i) {
    DeviceGroundTruth device;
    device.id = static_cast<int>(i);
    device.act_mem_per_batch = 1 << 22;
    device.total_mem = resident + (1 << 22) * 32.0;
    device.compute_fixed = cs[i].first;
    device.compute_per_batch = cs[i].second;
    cluster.devices.push_back(device);
    cluster.link_bandwidths.push_back(bandwidth);
  }
  cluster.link_latency = latency;
  return cluster;
}

struct Pipeline {
  ProfileResult profile;
  AllocationPlan planner_plan;
  AllocationPlan uniform_plan;
  ZeroStage stage = ZeroStage::kStage0;
};

Pipeline run_pipeline_for(const ClusterGroundTruth& cluster,
                          const ModelSpec& model, std::int64_t gbs,
                          ZeroStage stage) {
  Pipeline p;
  p.profile = profile_cluster(cluster, model, stage);
  p.stage = p.profile.effective_stage;
  const std::vector<PerfCurve> curves = build_curves(p.profile);
  const CommProfile comm = make_comm_profile(model, p.stage, cluster);
  p.planner_plan = plan(gbs, p.profile, p.stage, model, cluster);
  double tail = 0.0;
  for (const DeviceProfile& dev : p.profile.devices) {
    tail = std::max(tail, dev.optimizer_time);
  }
  p.uniform_plan = make_uniform_plan(gbs, curves, p.stage, comm, tail);
  return p;
}

}  // namespace

TEST_CASE("balanced plan on a homogeneous cluster has zero idle") {
  const ModelSpec model = tiny_model();
  const ClusterGroundTruth cluster =
      make_cluster({{0.1, 0.02}, {0.1, 0.02}}, model);
  const Pipeline p = run_pipeline_for(cluster, model, 16, ZeroStage::kStage0);
  const IterationReport report =
      simulate_iteration(cluster, model, p.planner_plan, p.stage);
  for (const double idle : report.idle) {
    CHECK(idle == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("stage-3 iteration time matches the hand-computed schedule") {
  // Latent: 0.1 + 0.05 b (mbs 8) and 0.1 + 0.1 b (mbs 4); per-micro-step
  // collectives cost 0.2 s in total; plan b = (8, 4), gas = 2.
  ModelSpec model = tiny_model(1e6);
  model.bytes_per_param = 2.0;
  ClusterGroundTruth cluster;
  const double resident = resident_state_bytes(model, ZeroStage::kStage3, 2);
  const std::vector<std::pair<double, std::int64_t>> shape = {{0.05, 8},
                                                              {0.1, 4}};
  for (std::size_t i = 0; i < shape.size(); ++i) {
    DeviceGroundTruth device;
    device.id = static_cast<int>(i);
    device.act_mem_per_batch = 1 << 22;
    device.total_mem =
        resident + (1 << 22) * static_cast<double>(shape[i].second);
    device.compute_fixed = 0.1;
    device.compute_per_batch = shape[i].first;
    cluster.devices.push_back(device);
    // 3 launches * psi_bytes / bw = 0.2 -> bw = 3 * 2e6 / 0.2.
    cluster.link_bandwidths.push_back(3.0 * 2e6 / 0.2);
  }

  const ProfileResult profile =
      profile_cluster(cluster, model, ZeroStage::kStage3);
  REQUIRE(profile.devices[0].mbs == 8);
  REQUIRE(profile.devices[1].mbs == 4);
  const AllocationPlan p = plan(24, profile, ZeroStage::kStage3, model, cluster);
  REQUIRE(p.devices[0].b == 8);
  REQUIRE(p.devices[1].b == 4);
  REQUIRE(p.gas == 2);

  const IterationReport report =
      simulate_iteration(cluster, model, p, ZeroStage::kStage3);
  // Both devices compute 0.5 s per step, two steps, plus 2 * 0.2 comm.
  CHECK(report.iteration_time == doctest::Approx(1.4).epsilon(1e-9));
  CHECK(report.throughput ==
        doctest::Approx(24.0 / 1.4).epsilon(1e-9));
}

TEST_CASE("throughput is definitionally gbs over T") {
  const ModelSpec model = tiny_model();
  const ClusterGroundTruth cluster =
      make_cluster({{0.05, 0.01}, {0.08, 0.03}}, model);
  const Pipeline p = run_pipeline_for(cluster, model, 21, ZeroStage::kStage1);
  const IterationReport report =
      simulate_iteration(cluster, model, p.planner_plan, p.stage);
  CHECK(report.throughput == 21.0 / report.iteration_time);
}

TEST_CASE("iteration reports satisfy the T and idle identities exactly") {
  std::mt19937_64 rng(67);
  std::uniform_int_distribution<int> n_dist(1, 5);
  std::uniform_int_distribution<std::int64_t> gbs_dist(1, 128);
  std::uniform_real_distribution<double> c0_dist(0.01, 0.3);
  std::uniform_real_distribution<double> c1_dist(0.005, 0.1);
  std::uniform_int_distribution<int> stage_dist(0, 3);
  const ModelSpec model = tiny_model();
  for (int trial = 0; trial < 60; ++trial) {
    const int n = n_dist(rng);
    std::vector<std::pair<double, double>> cs;
    for (int i = 0; i < n; ++i) cs.emplace_back(c0_dist(rng), c1_dist(rng));
    const ClusterGroundTruth cluster = make_cluster(cs, model, 1e9, 1e-4);
    const ZeroStage stage = stage_from_index(stage_dist(rng));
    const Pipeline p = run_pipeline_for(cluster, model, gbs_dist(rng), stage);
    const IterationReport report =
        simulate_iteration(cluster, model, p.planner_plan, p.stage);

    double max_busy = 0.0;
    for (const double busy : report.busy) max_busy = std::max(max_busy, busy);
    CHECK(report.iteration_time == max_busy);
    for (std::size_t i = 0; i < report.busy.size(); ++i) {
      CHECK(report.idle[i] == report.iteration_time - report.busy[i]);
      CHECK(report.idle[i] >= 0.0);
    }

    // Weighted-idle objective recomputed from the realized idle vector.
    double objective = 0.0;
    for (std::size_t i = 0; i < report.idle.size(); ++i) {
      objective += report.idle[i] * p.planner_plan.weights[i];
    }
    double expected = 0.0;
    for (std::size_t i = 0; i < report.idle.size(); ++i) {
      expected += (report.iteration_time - report.busy[i]) *
                  p.planner_plan.weights[i];
    }
    CHECK(objective == expected);
  }
}

TEST_CASE("work per iteration equals gbs for every stage") {
  const ModelSpec model = tiny_model();
  const ClusterGroundTruth cluster =
      make_cluster({{0.05, 0.01}, {0.1, 0.04}, {0.02, 0.02}}, model);
  for (int s = 0; s <= 3; ++s) {
    const Pipeline p =
        run_pipeline_for(cluster, model, 83, stage_from_index(s));
    CHECK(p.planner_plan.total_assigned() == 83);
    CHECK(p.uniform_plan.total_assigned() == 83);
  }
}

TEST_CASE("jitter-free runs have zero variance") {
  const ModelSpec model = tiny_model();
  const ClusterGroundTruth cluster =
      make_cluster({{0.05, 0.01}, {0.08, 0.03}}, model);
  const Pipeline p = run_pipeline_for(cluster, model, 32, ZeroStage::kStage2);
  const IterationReport once =
      simulate_iteration(cluster, model, p.planner_plan, p.stage);
  const SimReport fifty =
      simulate_run(cluster, model, p.planner_plan, p.stage, 50);
  CHECK(fifty.mean.iteration_time == once.iteration_time);
  CHECK(fifty.mean.throughput == once.throughput);

  const SimReport single =
      simulate_run(cluster, model, p.planner_plan, p.stage, 1);
  CHECK(single.mean.iteration_time == once.iteration_time);
}

TEST_CASE("jittered runs reproduce bit-exactly for a fixed seed") {
  const ModelSpec model = tiny_model();
  ClusterGroundTruth cluster =
      make_cluster({{0.05, 0.01}, {0.08, 0.03}}, model);
  cluster.seed = 2024;
  cluster.jitter = 0.1;
  const Pipeline p = run_pipeline_for(cluster, model, 32, ZeroStage::kStage0);
  const SimReport a = simulate_run(cluster, model, p.planner_plan, p.stage, 10);
  const SimReport b = simulate_run(cluster, model, p.planner_plan, p.stage, 10);
  CHECK(a.mean.iteration_time == b.mean.iteration_time);
  CHECK(a.mean.throughput == b.mean.throughput);
  // Jitter varies across iterations, so the mean is a true average.
  const IterationReport first =
      simulate_iteration(cluster, model, p.planner_plan, p.stage, 0);
  const IterationReport second =
      simulate_iteration(cluster, model, p.planner_plan, p.stage, 1);
  CHECK(first.iteration_time != second.iteration_time);
}

TEST_CASE("a plan compared with itself is break-even") {
  const ModelSpec model = tiny_model();
  const ClusterGroundTruth cluster =
      make_cluster({{0.05, 0.01}, {0.08, 0.03}}, model);
  const Pipeline p = run_pipeline_for(cluster, model, 24, ZeroStage::kStage0);
  CHECK(compare_plans(cluster, model, p.stage, p.planner_plan, p.planner_plan,
                      5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the planner beats the uniform split on a 2:1 cluster") {
  const ModelSpec model = tiny_model();
  const ClusterGroundTruth cluster =
      make_cluster({{0.02, 0.01}, {0.02, 0.02}}, model);
  const Pipeline p = run_pipeline_for(cluster, model, 48, ZeroStage::kStage0);
  const double speedup = compare_plans(cluster, model, p.stage, p.planner_plan,
                                       p.uniform_plan, 5);
  CHECK(speedup >= 1.0);
}

TEST_CASE("predicted wall time tracks the simulated iteration") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> n_dist(1, 4);
  std::uniform_int_distribution<std::int64_t> gbs_dist(1, 96);
  std::uniform_real_distribution<double> c0_dist(0.02, 0.2);
  std::uniform_real_distribution<double> c1_dist(0.01, 0.08);
  std::uniform_int_distribution<int> stage_dist(0, 3);
  const ModelSpec model = tiny_model();
  for (int trial = 0; trial < 40; ++trial) {
    const int n = n_dist(rng);
    std::vector<std::pair<double, double>> cs;
    for (int i = 0; i < n; ++i) cs.emplace_back(c0_dist(rng), c1_dist(rng));
    const ClusterGroundTruth cluster = make_cluster(cs, model, 5e8, 1e-4);
    const Pipeline p = run_pipeline_for(cluster, model, gbs_dist(rng),
                                        stage_from_index(stage_dist(rng)));
    const IterationReport report =
        simulate_iteration(cluster, model, p.planner_plan, p.stage);
    const double gap =
        std::fabs(p.planner_plan.predicted_wall_time - report.iteration_time) /
        report.iteration_time;
    CHECK(gap <= 0.02);
  }
}

TEST_CASE("plans that overrun device memory are rejected as internal bugs") {
  const ModelSpec model = tiny_model();
  const ClusterGroundTruth cluster = make_cluster({{0.05, 0.01}}, model);
  AllocationPlan bogus;
  bogus.stage = ZeroStage::kStage0;
  bogus.gbs = 64;
  bogus.gas = 1;
  DeviceAllocation dev;
  dev.device_id = 0;
  dev.b = 64;  // mbs is 32
  dev.gmbs = 64;
  dev.lbs = 64;
  bogus.devices.push_back(dev);
  bogus.weights = {1.0};
  bogus.metrics.idle = {0.0};
  bogus.metrics.under_utilization = {0.0};
  CHECK_THROWS_AS(
      simulate_iteration(cluster, model, bogus, ZeroStage::kStage0),
      InternalError);
}

TEST_CASE("stage mismatches are rejected") {
  const ModelSpec model = tiny_model();
  const ClusterGroundTruth cluster = make_cluster({{0.05, 0.01}}, model);
  const Pipeline p = run_pipeline_for(cluster, model, 8, ZeroStage::kStage0);
  CHECK_THROWS_AS(
      simulate_iteration(cluster, model, p.planner_plan, ZeroStage::kStage3),
      InvalidInputError);
}
