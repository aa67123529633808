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

#include "zeroplan/profiler.hpp"

#include <cmath>
#include <map>
#include <string>

#include "zeroplan/error.hpp"

namespace zeroplan {

double time_consumed_during_step(const StepTrace& trace, ZeroStage stage) {
  double wall = trace.forward_compute + trace.backward_compute;
  double excluded = 0.0;
  switch (stage) {
    case ZeroStage::kStage0:
    case ZeroStage::kStage1:
      break;  // collectives happen at the sync point, outside the step path
    case ZeroStage::kStage2:
      wall += trace.reduce_scatter;
      excluded = trace.reduce_scatter;
      break;
    case ZeroStage::kStage3:
      wall += trace.fwd_allgather + trace.bwd_allgather + trace.reduce_scatter;
      excluded =
          trace.fwd_allgather + trace.bwd_allgather + trace.reduce_scatter;
      break;
  }
  const double consumed = wall - excluded;
  if (consumed < 0.0) {
    throw InternalError("negative compute time after collective subtraction");
  }
  return consumed;
}

std::optional<std::int64_t> estimate_theoretical_mbs(
    const ClusterGroundTruth& cluster, int device_id, const ModelSpec& model,
    ZeroStage stage) {
  const auto probe = memory_probe(cluster, device_id, model, stage);
  if (!probe) return std::nullopt;
  const double slope = probe->after_forward - probe->before_forward;
  const double headroom =
      std::floor((probe->total - probe->before_forward) / slope);
  // Cap below 2^53 so the cast and later byte arithmetic stay exact.
  const double capped = std::min(headroom, 1e15);
  return std::max<std::int64_t>(static_cast<std::int64_t>(capped), 1);
}

SearchResult search_mbs(const ClusterGroundTruth& cluster, int device_id,
                        const ModelSpec& model, ZeroStage stage,
                        std::int64_t mbs_estimate) {
  if (mbs_estimate < 1) {
    throw InvalidInputError("mbs_estimate must be >= 1");
  }

  std::map<std::int64_t, double> samples;
  int probes = 0;
  double optimizer_time = 0.0;
  const auto probe = [&](std::int64_t batch) -> bool {
    ++probes;
    const auto trace = run_step(cluster, device_id, model, batch, stage);
    if (!trace) return false;
    samples[batch] = time_consumed_during_step(*trace, stage);
    optimizer_time = trace->optimizer_step;
    return true;
  };

  // Exponential phase: 1, 2, 4, ..., capped at the estimate itself.
  std::int64_t last_ok = 0;
  std::int64_t oom_at = 0;
  for (std::int64_t b = 1; b <= mbs_estimate;) {
    if (probe(b)) {
      last_ok = b;
    } else {
      oom_at = b;
      break;
    }
    if (b == mbs_estimate) break;
    b = std::min(b * 2, mbs_estimate);
  }

  if (last_ok == 0) {
    // Batch size 1 OOMed; callers gate on memory_probe so this is a bug.
    throw InternalError("search_mbs: batch size 1 does not fit");
  }

  std::int64_t mbs = last_ok;
  if (oom_at != 0) {
    // Largest workable batch lies in [last_ok, oom_at).
    std::int64_t lo = last_ok;
    std::int64_t hi = oom_at - 1;
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (probe(mid)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    mbs = lo;
  }

  SearchResult result;
  result.mbs = mbs;
  result.probes_used = probes;
  result.optimizer_time = optimizer_time;
  result.samples.reserve(samples.size());
  for (const auto& [batch, time] : samples) {
    if (batch <= mbs) {
      result.samples.push_back(BatchSample{batch, time});
    }
  }
  return result;
}

ProfileResult profile_cluster(const ClusterGroundTruth& cluster,
                              const ModelSpec& model,
                              std::optional<ZeroStage> stage_request) {
  cluster.validate();
  model.validate();

  const int first = stage_request ? stage_index(*stage_request) : 0;
  for (int s = first; s <= 3; ++s) {
    const ZeroStage stage = stage_from_index(s);
    bool fits_everywhere = true;
    for (int dev = 0; dev < cluster.device_count(); ++dev) {
      if (!memory_probe(cluster, dev, model, stage)) {
        fits_everywhere = false;
        break;
      }
    }
    if (!fits_everywhere) continue;  // escalate and restart

    ProfileResult result;
    result.effective_stage = stage;
    result.devices.reserve(cluster.devices.size());
    for (int dev = 0; dev < cluster.device_count(); ++dev) {
      const auto estimate = estimate_theoretical_mbs(cluster, dev, model, stage);
      if (!estimate) {
        throw InternalError("memory probe and estimate disagree");
      }
      const SearchResult search =
          search_mbs(cluster, dev, model, stage, *estimate);
      DeviceProfile profile;
      profile.device_id = dev;
      profile.mbs = search.mbs;
      profile.samples = search.samples;
      profile.probes_used = search.probes_used;
      profile.optimizer_time = search.optimizer_time;
      result.devices.push_back(std::move(profile));
    }
    return result;
  }

  throw InfeasibleError(
      "model too large: a single batch does not fit on every device even at "
      "ZeRO stage 3");
}

}  // namespace zeroplan
