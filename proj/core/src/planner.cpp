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

#include "zeroplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "zeroplan/error.hpp"

namespace zeroplan {

namespace {

std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  return (num + den - 1) / den;
}

std::vector<double> peak_speeds(const std::vector<PerfCurve>& curves) {
  std::vector<double> speeds;
  speeds.reserve(curves.size());
  for (const PerfCurve& c : curves) speeds.push_back(c.peak_speed());
  return speeds;
}

// Fills b/lbs/predicted_time for one device given its iteration total and
// chosen step batch, and returns the accumulation step count.
std::int64_t finalize_device(DeviceAllocation& dev, const PerfCurve& curve,
                             std::int64_t total, std::int64_t step_batch) {
  dev.gmbs = total;
  if (total == 0) {
    dev.b = 0;
    dev.lbs = 0;
    dev.predicted_time = 0.0;
    return 0;
  }
  dev.b = step_batch;
  const std::int64_t steps = ceil_div(total, step_batch);
  dev.lbs = total - (steps - 1) * step_batch;
  dev.predicted_time =
      static_cast<double>(steps - 1) * curve.predict_step_time(dev.b) +
      curve.predict_step_time(dev.lbs);
  return steps;
}

void attach_metrics(AllocationPlan& plan, const std::vector<PerfCurve>& curves) {
  std::vector<double> finish;
  finish.reserve(plan.devices.size());
  for (const DeviceAllocation& dev : plan.devices) {
    finish.push_back(dev.predicted_time);
  }
  plan.weights = peak_speeds(curves);
  plan.metrics = compute_plan_metrics(finish, plan.weights);
}

// Proportionally scales the last micro-step so per-device totals sum to gbs
// exactly: lbs_i is the largest-remainder rounding of b_i * last_total /
// micro. Ties go to the lowest device index.
std::vector<std::int64_t> scale_last_step(const std::vector<std::int64_t>& b,
                                          std::int64_t micro,
                                          std::int64_t last_total) {
  const std::size_t n = b.size();
  std::vector<std::int64_t> lbs(n, 0);
  std::vector<std::int64_t> frac(n, 0);
  std::int64_t base_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t num = b[i] * last_total;
    lbs[i] = num / micro;
    frac[i] = num % micro;
    base_sum += lbs[i];
  }
  std::int64_t extra = last_total - base_sum;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t lhs, std::size_t rhs) {
                     return frac[lhs] > frac[rhs];
                   });
  for (std::size_t k = 0; k < order.size() && extra > 0; ++k, --extra) {
    lbs[order[k]] += 1;
  }
  return lbs;
}

}  // namespace

PlanMetrics compute_plan_metrics(const std::vector<double>& finish_times,
                                 const std::vector<double>& weights) {
  if (finish_times.size() != weights.size()) {
    throw InvalidInputError("finish_times and weights must have equal length");
  }
  PlanMetrics metrics;
  for (const double t : finish_times) {
    metrics.iteration_time = std::max(metrics.iteration_time, t);
  }
  metrics.idle.reserve(finish_times.size());
  metrics.under_utilization.reserve(finish_times.size());
  for (std::size_t i = 0; i < finish_times.size(); ++i) {
    const double idle = metrics.iteration_time - finish_times[i];
    metrics.idle.push_back(idle);
    metrics.under_utilization.push_back(idle * weights[i]);
    metrics.objective += idle * weights[i];
  }
  return metrics;
}

std::int64_t AllocationPlan::device_gas(std::size_t i) const {
  const DeviceAllocation& dev = devices.at(i);
  if (dev.gmbs == 0) return 0;
  if (stage == ZeroStage::kStage2 || stage == ZeroStage::kStage3) return gas;
  return ceil_div(dev.gmbs, dev.b);
}

std::int64_t AllocationPlan::total_assigned() const {
  std::int64_t total = 0;
  for (const DeviceAllocation& dev : devices) total += dev.gmbs;
  return total;
}

std::vector<std::int64_t> allocate_remainder(std::vector<std::int64_t> gmbs,
                                             const std::vector<PerfCurve>& curves,
                                             std::int64_t batch_remain) {
  if (gmbs.size() != curves.size()) {
    throw InvalidInputError("gmbs and curves must have equal length");
  }
  if (batch_remain < 0) {
    throw InvalidInputError("batch_remain must be >= 0");
  }
  const std::vector<double> speeds = peak_speeds(curves);
  const double total_speed = std::accumulate(speeds.begin(), speeds.end(), 0.0);
  const double total_batches = static_cast<double>(
      std::accumulate(gmbs.begin(), gmbs.end(), std::int64_t{0}) + batch_remain);
  const double time_optimal = total_batches / total_speed;

  // u_i = time_optimal * speed_i - gmbs_i, recomputed each round; the most
  // under-utilized device gets the next batch.
  for (; batch_remain > 0; --batch_remain) {
    std::size_t pick = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gmbs.size(); ++i) {
      const double u = time_optimal * speeds[i] - static_cast<double>(gmbs[i]);
      if (u > best) {
        best = u;
        pick = i;
      }
    }
    gmbs[pick] += 1;
  }
  return gmbs;
}

AllocationPlan plan_zero01(std::int64_t gbs,
                           const std::vector<PerfCurve>& curves) {
  if (curves.empty()) {
    throw InvalidInputError("plan requires at least one curve");
  }
  if (gbs < 1) {
    throw InvalidInputError("gbs must be >= 1");
  }
  const std::size_t n = curves.size();
  const std::vector<double> speeds = peak_speeds(curves);
  const double total_speed = std::accumulate(speeds.begin(), speeds.end(), 0.0);
  const double time_optimal = static_cast<double>(gbs) / total_speed;

  std::vector<std::int64_t> gmbs(n, 0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    gmbs[i] = static_cast<std::int64_t>(std::floor(time_optimal * speeds[i]));
    assigned += gmbs[i];
  }
  // Floating-point rounding can overshoot the target by a unit; pull back
  // from the least under-utilized device before distributing the remainder.
  while (assigned > gbs) {
    std::size_t pick = 0;
    double least = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (gmbs[i] == 0) continue;
      const double u = time_optimal * speeds[i] - static_cast<double>(gmbs[i]);
      if (u < least) {
        least = u;
        pick = i;
      }
    }
    gmbs[pick] -= 1;
    --assigned;
  }
  gmbs = allocate_remainder(std::move(gmbs), curves, gbs - assigned);

  AllocationPlan plan;
  plan.stage = ZeroStage::kStage0;
  plan.gbs = gbs;
  plan.devices.resize(n);
  plan.gas = 1;
  for (std::size_t i = 0; i < n; ++i) {
    DeviceAllocation& dev = plan.devices[i];
    dev.device_id = curves[i].device_id();
    // Largest step batch inside the peak range that still fits the device's
    // total; small totals fall back to a single step of the whole total.
    const std::int64_t step_batch =
        std::min(curves[i].peak_range().hi, std::max<std::int64_t>(gmbs[i], 1));
    const std::int64_t steps = finalize_device(dev, curves[i], gmbs[i], step_batch);
    plan.gas = std::max(plan.gas, steps);
  }
  attach_metrics(plan, curves);
  plan.predicted_wall_time = plan.metrics.iteration_time;
  return plan;
}

AllocationPlan plan_zero23(std::int64_t gbs,
                           const std::vector<PerfCurve>& curves,
                           const CommProfile& comm) {
  if (curves.empty()) {
    throw InvalidInputError("plan requires at least one curve");
  }
  if (gbs < 1) {
    throw InvalidInputError("gbs must be >= 1");
  }
  const std::size_t n = curves.size();

  // Candidate step times: an even grid over [time_min, time_max] joined with
  // every per-device step-time knot, so the sweep sees every point where
  // find() changes value.
  double time_min = std::numeric_limits<double>::infinity();
  double time_max = 0.0;
  std::vector<double> ts;
  std::size_t knot_count = 0;
  for (const PerfCurve& curve : curves) {
    time_min = std::min(time_min, curve.predict_step_time(1));
    time_max = std::max(time_max, curve.predict_step_time(curve.mbs()));
    knot_count += static_cast<std::size_t>(curve.mbs());
  }
  constexpr int kGridPoints = 512;
  ts.reserve(knot_count + kGridPoints);
  for (int k = 0; k < kGridPoints; ++k) {
    ts.push_back(time_min + (time_max - time_min) * static_cast<double>(k) /
                                static_cast<double>(kGridPoints - 1));
  }
  for (const PerfCurve& curve : curves) {
    const std::vector<double>& times = curve.step_times();
    ts.insert(ts.end(), times.begin(), times.end());
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  // Per-device knots sorted by time with a running prefix-max batch: walking
  // them in time order yields find_max_batch_within_time(t) incrementally.
  struct Knot {
    double time;
    std::int64_t batch;
  };
  std::vector<std::vector<Knot>> knots(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double>& times = curves[i].step_times();
    knots[i].reserve(times.size());
    for (std::size_t b = 0; b < times.size(); ++b) {
      knots[i].push_back(Knot{times[b], static_cast<std::int64_t>(b + 1)});
    }
    std::sort(knots[i].begin(), knots[i].end(),
              [](const Knot& lhs, const Knot& rhs) { return lhs.time < rhs.time; });
  }

  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::int64_t> reachable(n, 0);
  std::vector<std::int64_t> best_b;
  std::int64_t best_gas = 0;
  double best_wall = std::numeric_limits<double>::infinity();
  for (const double t : ts) {
    std::int64_t micro = 0;
    for (std::size_t i = 0; i < n; ++i) {
      while (cursor[i] < knots[i].size() && knots[i][cursor[i]].time <= t) {
        reachable[i] = std::max(reachable[i], knots[i][cursor[i]].batch);
        ++cursor[i];
      }
      micro += reachable[i];
    }
    if (micro == 0) continue;
    const std::int64_t gas = ceil_div(gbs, micro);
    const double wall = (t + comm.time_per_step) * static_cast<double>(gas);
    if (wall < best_wall) {
      best_wall = wall;
      best_b = reachable;
      best_gas = gas;
    }
  }
  if (best_b.empty()) {
    throw InfeasibleError("no feasible per-step time: every device sits out");
  }

  const std::int64_t micro =
      std::accumulate(best_b.begin(), best_b.end(), std::int64_t{0});
  const std::int64_t last_total = gbs - (best_gas - 1) * micro;
  const std::vector<std::int64_t> lbs = scale_last_step(best_b, micro, last_total);

  AllocationPlan plan;
  plan.stage = ZeroStage::kStage3;
  plan.gbs = gbs;
  plan.gas = best_gas;
  plan.devices.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    DeviceAllocation& dev = plan.devices[i];
    dev.device_id = curves[i].device_id();
    dev.b = best_b[i];
    dev.lbs = lbs[i];
    dev.gmbs = (best_gas - 1) * best_b[i] + lbs[i];
    double time = 0.0;
    if (dev.b > 0) {
      time += static_cast<double>(best_gas - 1) * curves[i].predict_step_time(dev.b);
    }
    if (dev.lbs > 0) {
      time += curves[i].predict_step_time(dev.lbs);
    }
    dev.predicted_time = time;
  }
  attach_metrics(plan, curves);
  plan.predicted_wall_time =
      plan.metrics.iteration_time +
      static_cast<double>(plan.gas) * comm.time_per_step;
  return plan;
}

void attach_overheads(AllocationPlan& plan, const CommProfile& comm,
                      double optimizer_tail) {
  plan.predicted_wall_time += comm.sync_time + optimizer_tail;
}

AllocationPlan plan(std::int64_t gbs, const ProfileResult& profile,
                    ZeroStage stage, const ModelSpec& model,
                    const ClusterGroundTruth& cluster) {
  if (profile.devices.size() != cluster.devices.size()) {
    throw InvalidInputError("profile does not match the cluster device count");
  }
  const std::vector<PerfCurve> curves = build_curves(profile);
  const CommProfile comm = make_comm_profile(model, stage, cluster);
  AllocationPlan result =
      (stage == ZeroStage::kStage0 || stage == ZeroStage::kStage1)
          ? plan_zero01(gbs, curves)
          : plan_zero23(gbs, curves, comm);
  result.stage = stage;
  double optimizer_tail = 0.0;
  for (const DeviceProfile& dev : profile.devices) {
    optimizer_tail = std::max(optimizer_tail, dev.optimizer_time);
  }
  attach_overheads(result, comm, optimizer_tail);
  return result;
}

AllocationPlan make_uniform_plan(std::int64_t gbs,
                                 const std::vector<PerfCurve>& curves,
                                 ZeroStage stage, const CommProfile& comm,
                                 double optimizer_tail) {
  if (curves.empty()) {
    throw InvalidInputError("plan requires at least one curve");
  }
  if (gbs < 1) {
    throw InvalidInputError("gbs must be >= 1");
  }
  const std::size_t n = curves.size();
  std::int64_t min_mbs = curves[0].mbs();
  for (const PerfCurve& curve : curves) {
    min_mbs = std::min(min_mbs, curve.mbs());
  }

  AllocationPlan plan;
  plan.stage = stage;
  plan.gbs = gbs;
  plan.devices.resize(n);
  plan.gas = 1;

  if (stage == ZeroStage::kStage0 || stage == ZeroStage::kStage1) {
    const std::int64_t base = gbs / static_cast<std::int64_t>(n);
    const std::int64_t rem = gbs % static_cast<std::int64_t>(n);
    for (std::size_t i = 0; i < n; ++i) {
      DeviceAllocation& dev = plan.devices[i];
      dev.device_id = curves[i].device_id();
      const std::int64_t total =
          base + (static_cast<std::int64_t>(i) < rem ? 1 : 0);
      const std::int64_t step_batch =
          std::max<std::int64_t>(std::min(total, min_mbs), 1);
      const std::int64_t steps =
          finalize_device(dev, curves[i], total, step_batch);
      plan.gas = std::max(plan.gas, steps);
    }
    attach_metrics(plan, curves);
    plan.predicted_wall_time = plan.metrics.iteration_time;
  } else {
    const std::vector<std::int64_t> b(n, min_mbs);
    const std::int64_t micro = min_mbs * static_cast<std::int64_t>(n);
    plan.gas = ceil_div(gbs, micro);
    const std::int64_t last_total = gbs - (plan.gas - 1) * micro;
    const std::vector<std::int64_t> lbs = scale_last_step(b, micro, last_total);
    for (std::size_t i = 0; i < n; ++i) {
      DeviceAllocation& dev = plan.devices[i];
      dev.device_id = curves[i].device_id();
      dev.b = b[i];
      dev.lbs = lbs[i];
      dev.gmbs = (plan.gas - 1) * b[i] + lbs[i];
      double time =
          static_cast<double>(plan.gas - 1) * curves[i].predict_step_time(dev.b);
      if (dev.lbs > 0) time += curves[i].predict_step_time(dev.lbs);
      dev.predicted_time = time;
    }
    attach_metrics(plan, curves);
    plan.predicted_wall_time =
        plan.metrics.iteration_time +
        static_cast<double>(plan.gas) * comm.time_per_step;
  }
  attach_overheads(plan, comm, optimizer_tail);
  return plan;
}

}  // namespace zeroplan
