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

#include "zeroplan/hardware.hpp"

#include <cstdint>
#include <string>

#include "zeroplan/comm.hpp"
#include "zeroplan/error.hpp"

namespace zeroplan {

namespace {

// splitmix64; decorrelates the jitter stream across (seed, device, stage,
// batch, index) tuples.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double jitter_factor(const ClusterGroundTruth& cluster, int device_id,
                     ZeroStage stage, std::int64_t batch,
                     std::uint64_t noise_index) {
  if (cluster.jitter <= 0.0) return 1.0;
  std::uint64_t h = cluster.seed;
  h = mix64(h ^ static_cast<std::uint64_t>(device_id));
  h = mix64(h ^ static_cast<std::uint64_t>(stage_index(stage)));
  h = mix64(h ^ static_cast<std::uint64_t>(batch));
  h = mix64(h ^ noise_index);
  const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
  return 1.0 + cluster.jitter * (2.0 * unit - 1.0);
}

const DeviceGroundTruth& device_at(const ClusterGroundTruth& cluster,
                                   int device_id) {
  if (device_id < 0 || device_id >= cluster.device_count()) {
    throw InvalidInputError("device_id out of range: " +
                            std::to_string(device_id));
  }
  return cluster.devices[static_cast<std::size_t>(device_id)];
}

}  // namespace

void ClusterGroundTruth::validate() const {
  if (devices.empty()) {
    throw InvalidInputError("cluster.devices: must contain at least one device");
  }
  if (link_bandwidths.size() != devices.size()) {
    throw InvalidInputError(
        "cluster.link_bandwidths: must have one entry per device");
  }
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const std::string prefix = "cluster.devices[" + std::to_string(i) + "].";
    const DeviceGroundTruth& d = devices[i];
    if (d.total_mem <= 0.0) {
      throw InvalidInputError(prefix + "total_mem: must be positive");
    }
    if (d.act_mem_per_batch <= 0.0) {
      throw InvalidInputError(prefix + "act_mem_per_batch: must be positive");
    }
    if (d.compute_fixed < 0.0) {
      throw InvalidInputError(prefix + "compute_fixed: must be >= 0");
    }
    if (d.compute_per_batch <= 0.0) {
      throw InvalidInputError(prefix + "compute_per_batch: must be positive");
    }
    if (d.optimizer_time < 0.0) {
      throw InvalidInputError(prefix + "optimizer_time: must be >= 0");
    }
  }
  for (std::size_t i = 0; i < link_bandwidths.size(); ++i) {
    if (link_bandwidths[i] <= 0.0) {
      throw InvalidInputError("cluster.link_bandwidths[" + std::to_string(i) +
                              "]: must be positive");
    }
  }
  if (link_latency < 0.0) {
    throw InvalidInputError("cluster.link_latency: must be >= 0");
  }
  if (jitter < 0.0 || jitter >= 1.0) {
    throw InvalidInputError("cluster.jitter: must be in [0, 1)");
  }
}

void ModelSpec::validate() const {
  if (param_count <= 0.0) {
    throw InvalidInputError("model.param_count: must be positive");
  }
  if (hidden_size <= 0) {
    throw InvalidInputError("model.hidden_size: must be positive");
  }
  if (num_layers <= 0) {
    throw InvalidInputError("model.num_layers: must be positive");
  }
  if (bytes_per_param <= 0.0) {
    throw InvalidInputError("model.bytes_per_param: must be positive");
  }
  if (optimizer_state_multiplier < 2.0 * bytes_per_param) {
    throw InvalidInputError(
        "model.optimizer_state_multiplier: must cover parameter and gradient "
        "state (>= 2 * bytes_per_param)");
  }
}

double resident_state_bytes(const ModelSpec& model, ZeroStage stage, int n) {
  if (n < 1) {
    throw InvalidInputError("device count must be >= 1");
  }
  const double psi = model.param_count;
  const double param_share = model.bytes_per_param;
  const double grad_share = model.bytes_per_param;
  const double opt_share =
      model.optimizer_state_multiplier - param_share - grad_share;
  const double ranks = static_cast<double>(n);
  switch (stage) {
    case ZeroStage::kStage0:
      return model.optimizer_state_multiplier * psi;
    case ZeroStage::kStage1:
      return (param_share + grad_share) * psi + opt_share * psi / ranks;
    case ZeroStage::kStage2:
      return param_share * psi + (grad_share + opt_share) * psi / ranks;
    case ZeroStage::kStage3:
      return model.optimizer_state_multiplier * psi / ranks;
  }
  return 0.0;
}

std::optional<StepTrace> run_step(const ClusterGroundTruth& cluster,
                                  int device_id, const ModelSpec& model,
                                  std::int64_t batch_size, ZeroStage stage,
                                  std::uint64_t noise_index) {
  const DeviceGroundTruth& device = device_at(cluster, device_id);
  if (batch_size < 1) {
    throw InvalidInputError("batch_size must be >= 1");
  }
  const double resident =
      resident_state_bytes(model, stage, cluster.device_count());
  const double needed =
      resident + device.act_mem_per_batch * static_cast<double>(batch_size);
  if (needed > device.total_mem) {
    return std::nullopt;  // OOM
  }

  const double compute =
      (device.compute_fixed +
       device.compute_per_batch * static_cast<double>(batch_size)) *
      jitter_factor(cluster, device_id, stage, batch_size, noise_index);

  StepTrace trace;
  trace.forward_compute = compute / 3.0;        // 1:2 forward:backward split
  trace.backward_compute = compute * 2.0 / 3.0;
  trace.optimizer_step = device.optimizer_time;

  const double psi_bytes = model.param_count * model.bytes_per_param;
  switch (stage) {
    case ZeroStage::kStage0:
    case ZeroStage::kStage1:
      trace.allreduce = collective_time(2.0 * psi_bytes, cluster);
      break;
    case ZeroStage::kStage2:
      trace.reduce_scatter = collective_time(psi_bytes, cluster);
      trace.allreduce = collective_time(psi_bytes, cluster);
      break;
    case ZeroStage::kStage3:
      trace.fwd_allgather = collective_time(psi_bytes, cluster);
      trace.bwd_allgather = collective_time(psi_bytes, cluster);
      trace.reduce_scatter = collective_time(psi_bytes, cluster);
      break;
  }
  return trace;
}

std::optional<MemoryProbe> memory_probe(const ClusterGroundTruth& cluster,
                                        int device_id, const ModelSpec& model,
                                        ZeroStage stage) {
  const DeviceGroundTruth& device = device_at(cluster, device_id);
  const double resident =
      resident_state_bytes(model, stage, cluster.device_count());
  if (resident + device.act_mem_per_batch > device.total_mem) {
    return std::nullopt;  // not even batch size 1 fits
  }
  MemoryProbe probe;
  probe.before_forward = resident;
  probe.after_forward = resident + device.act_mem_per_batch;
  probe.total = device.total_mem;
  return probe;
}

}  // namespace zeroplan
