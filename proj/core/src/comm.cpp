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

#include "zeroplan/comm.hpp"

#include <algorithm>
#include <string>

#include "zeroplan/error.hpp"

namespace zeroplan {

namespace {

std::uint64_t checked_hd(std::int64_t hidden_size, std::int64_t layers) {
  if (hidden_size < 1 || layers < 1) {
    throw InvalidInputError("ffn volume requires hidden_size >= 1 and layers "
                            ">= 1");
  }
  return static_cast<std::uint64_t>(hidden_size);
}

}  // namespace

std::uint64_t ffn_forward_volume(std::int64_t hidden_size,
                                 std::int64_t layers) {
  // Forward all-gather: [(h x 4h) + (4h x h)] * d = 8dh^2 elements.
  const std::uint64_t h = checked_hd(hidden_size, layers);
  return 8ull * static_cast<std::uint64_t>(layers) * h * h;
}

std::uint64_t ffn_backward_volume(std::int64_t hidden_size,
                                  std::int64_t layers) {
  // Backward all-gather plus reduce-scatter: 2 * 8dh^2 elements.
  const std::uint64_t h = checked_hd(hidden_size, layers);
  return 16ull * static_cast<std::uint64_t>(layers) * h * h;
}

std::uint64_t ffn_comm_volume(std::int64_t hidden_size, std::int64_t layers) {
  return ffn_forward_volume(hidden_size, layers) +
         ffn_backward_volume(hidden_size, layers);
}

double stage_comm_volume(const ModelSpec& model, ZeroStage stage) {
  const double psi_bytes = model.param_count * model.bytes_per_param;
  return (stage == ZeroStage::kStage3 ? 3.0 : 2.0) * psi_bytes;
}

double micro_step_comm_volume(const ModelSpec& model, ZeroStage stage) {
  const double psi_bytes = model.param_count * model.bytes_per_param;
  switch (stage) {
    case ZeroStage::kStage0:
    case ZeroStage::kStage1:
      return 0.0;
    case ZeroStage::kStage2:
      return psi_bytes;  // gradient reduce-scatter per backward
    case ZeroStage::kStage3:
      return 3.0 * psi_bytes;
  }
  return 0.0;
}

double sync_comm_volume(const ModelSpec& model, ZeroStage stage) {
  const double psi_bytes = model.param_count * model.bytes_per_param;
  switch (stage) {
    case ZeroStage::kStage0:
    case ZeroStage::kStage1:
      return 2.0 * psi_bytes;  // gradient all-reduce (reduce-scatter + all-gather)
    case ZeroStage::kStage2:
      return psi_bytes;  // updated-parameter all-gather
    case ZeroStage::kStage3:
      return 0.0;
  }
  return 0.0;
}

double collective_time(double volume_bytes,
                       const ClusterGroundTruth& cluster) {
  if (volume_bytes < 0.0) {
    throw InvalidInputError("collective volume must be >= 0");
  }
  if (cluster.link_bandwidths.empty()) {
    throw InvalidInputError("cluster.link_bandwidths: must not be empty");
  }
  const double bottleneck = *std::min_element(cluster.link_bandwidths.begin(),
                                              cluster.link_bandwidths.end());
  return cluster.link_latency + volume_bytes / bottleneck;
}

double micro_step_comm_time(const ModelSpec& model, ZeroStage stage,
                            const ClusterGroundTruth& cluster) {
  const double psi_bytes = model.param_count * model.bytes_per_param;
  switch (stage) {
    case ZeroStage::kStage0:
    case ZeroStage::kStage1:
      return 0.0;
    case ZeroStage::kStage2:
      return collective_time(psi_bytes, cluster);
    case ZeroStage::kStage3:
      return 3.0 * collective_time(psi_bytes, cluster);
  }
  return 0.0;
}

double sync_comm_time(const ModelSpec& model, ZeroStage stage,
                      const ClusterGroundTruth& cluster) {
  if (stage == ZeroStage::kStage3) return 0.0;  // no sync collective launched
  return collective_time(sync_comm_volume(model, stage), cluster);
}

CommProfile make_comm_profile(const ModelSpec& model, ZeroStage stage,
                              const ClusterGroundTruth& cluster) {
  const double psi_bytes = model.param_count * model.bytes_per_param;
  CommProfile profile;
  profile.stage = stage;
  switch (stage) {
    case ZeroStage::kStage0:
    case ZeroStage::kStage1:
      profile.volume_optimizer = 2.0 * psi_bytes;
      break;
    case ZeroStage::kStage2:
      profile.volume_backward = psi_bytes;
      profile.volume_optimizer = psi_bytes;
      break;
    case ZeroStage::kStage3:
      profile.volume_forward = psi_bytes;
      profile.volume_backward = 2.0 * psi_bytes;
      break;
  }
  profile.time_per_step = micro_step_comm_time(model, stage, cluster);
  profile.sync_time = sync_comm_time(model, stage, cluster);
  return profile;
}

}  // namespace zeroplan
