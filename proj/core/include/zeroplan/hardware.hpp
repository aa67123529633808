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

#ifndef ZEROPLAN_HARDWARE_HPP_
#define ZEROPLAN_HARDWARE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeroplan/zero_stage.hpp"

namespace zeroplan {

/// Latent ground truth for one simulated GPU. The profiler never reads these
/// fields directly; it only observes memory probes, step timings, and OOM
/// signals. Step time is affine in the batch size:
/// compute(b) = compute_fixed + compute_per_batch * b, which yields the
/// rise-then-plateau speed curve speed(b) = b / compute(b) saturating at
/// 1 / compute_per_batch.
struct DeviceGroundTruth {
  int id = 0;
  std::string name;
  double total_mem = 0.0;           // bytes
  double act_mem_per_batch = 0.0;   // activation bytes per unit batch
  double compute_fixed = 0.0;       // seconds per step (c0)
  double compute_per_batch = 0.0;   // seconds per batch (c1)
  double optimizer_time = 0.0;      // seconds per optimizer update

  friend bool operator==(const DeviceGroundTruth&,
                         const DeviceGroundTruth&) = default;
};

/// A heterogeneous cluster: devices plus a flat interconnect model with one
/// bottleneck bandwidth per device and a fixed launch latency per collective.
struct ClusterGroundTruth {
  std::vector<DeviceGroundTruth> devices;
  std::vector<double> link_bandwidths;  // bytes/second, one per device
  double link_latency = 0.0;            // seconds per collective launch
  std::uint64_t seed = 0;
  double jitter = 0.0;  // multiplicative timing noise amplitude; 0 = off

  int device_count() const { return static_cast<int>(devices.size()); }

  /// Throws InvalidInputError on any violated field invariant; error messages
  /// name the offending field.
  void validate() const;

  friend bool operator==(const ClusterGroundTruth&,
                         const ClusterGroundTruth&) = default;
};

/// Model dimensions and per-parameter memory accounting.
struct ModelSpec {
  double param_count = 0.0;     // total parameters (psi)
  std::int64_t hidden_size = 0;
  std::int64_t num_layers = 0;
  double bytes_per_param = 2.0;  // wire/parameter width (half precision)
  // Bytes of parameter + gradient + optimizer state per parameter under full
  // replication; the default 16 = 2 (param) + 2 (grad) + 12 (fp32 optimizer).
  double optimizer_state_multiplier = 16.0;

  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Timing decomposition of one probe step (one micro-step plus the
/// synchronization path, i.e. a gas = 1 iteration). Fields that do not apply
/// to the stage are zero. `allreduce` holds the synchronization-point
/// collective: the gradient all-reduce for stages 0/1, the parameter
/// all-gather for stage 2, nothing for stage 3.
struct StepTrace {
  double forward_compute = 0.0;
  double backward_compute = 0.0;
  double fwd_allgather = 0.0;
  double bwd_allgather = 0.0;
  double reduce_scatter = 0.0;
  double allreduce = 0.0;
  double optimizer_step = 0.0;
};

struct MemoryProbe {
  double before_forward = 0.0;  // bytes resident before a batch-1 forward
  double after_forward = 0.0;   // bytes resident after the forward
  double total = 0.0;           // device memory capacity in bytes
};

/// Bytes of model state resident on one device at the given stage with n
/// ranks. Stage 0 replicates everything; stages 1-3 shard optimizer state,
/// then gradients, then parameters.
double resident_state_bytes(const ModelSpec& model, ZeroStage stage, int n);

/// Runs one full step (forward + backward + collectives + optimizer) of the
/// given batch size on one device. Returns nullopt on OOM, which happens
/// exactly when resident state + activations exceed device memory. The
/// result is a pure function of the arguments (noise_index feeds the
/// optional jitter stream; with jitter disabled it is ignored).
std::optional<StepTrace> run_step(const ClusterGroundTruth& cluster,
                                  int device_id, const ModelSpec& model,
                                  std::int64_t batch_size, ZeroStage stage,
                                  std::uint64_t noise_index = 0);

/// Memory readings around a batch-1 forward. Returns nullopt when even batch
/// size 1 does not fit, which callers treat as a stage-escalation signal.
std::optional<MemoryProbe> memory_probe(const ClusterGroundTruth& cluster,
                                        int device_id, const ModelSpec& model,
                                        ZeroStage stage);

}  // namespace zeroplan

#endif  // ZEROPLAN_HARDWARE_HPP_
