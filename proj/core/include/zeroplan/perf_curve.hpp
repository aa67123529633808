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

#ifndef ZEROPLAN_PERF_CURVE_HPP_
#define ZEROPLAN_PERF_CURVE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "zeroplan/profiler.hpp"
#include "zeroplan/spline.hpp"

namespace zeroplan {

/// Continuous speed-vs-batch-size model for one device, fitted from
/// profiling samples. Speeds are batches/second; a single-sample profile
/// degenerates to a constant curve. Integer batch sizes 1..mbs are the only
/// domain the planner queries, so their speeds and step times are cached at
/// construction.
class PerfCurve {
 public:
  /// Batch sizes within 5% of peak speed count as the peak range.
  static constexpr double kPeakEpsilon = 0.05;
  /// Lower clamp on evaluated speeds, guarding against spline wiggle.
  static constexpr double kSpeedFloor = 1e-9;

  struct PeakRange {
    std::int64_t lo = 1;
    std::int64_t hi = 1;
  };

  int device_id() const { return device_id_; }
  std::int64_t mbs() const { return mbs_; }
  double peak_speed() const { return peak_speed_; }
  PeakRange peak_range() const { return peak_range_; }
  const std::optional<CubicSpline>& spline() const { return spline_; }
  const std::vector<BatchSample>& samples() const { return samples_; }

  /// Speed at an arbitrary (real) batch size, clamped to >= kSpeedFloor.
  double speed_at(double batch) const;

  /// Predicted seconds for one step of batch size b; requires 1 <= b <= mbs.
  double predict_step_time(std::int64_t b) const;

  /// Largest integer b in [0, mbs] with predict_step_time(b) <= t; 0 means
  /// the device sits out. Descending integer scan from mbs.
  std::int64_t find_max_batch_within_time(double t) const;

  /// Cached predict_step_time values, index b-1 for b in 1..mbs.
  const std::vector<double>& step_times() const { return times_; }

 private:
  friend PerfCurve build_curve(std::vector<BatchSample> samples,
                               std::int64_t mbs, int device_id);

  int device_id_ = 0;
  std::int64_t mbs_ = 0;
  std::optional<CubicSpline> spline_;  // empty for single-sample profiles
  double constant_speed_ = 0.0;
  double peak_speed_ = 0.0;
  PeakRange peak_range_;
  std::vector<double> speeds_;  // index b-1
  std::vector<double> times_;   // index b-1
  std::vector<BatchSample> samples_;
};

/// Fits the speed curve over points (b, b / time_b) and scans integers
/// 1..mbs for the peak speed and peak range.
PerfCurve build_curve(std::vector<BatchSample> samples, std::int64_t mbs,
                      int device_id = 0);

/// One curve per profiled device, in device order.
std::vector<PerfCurve> build_curves(const ProfileResult& profile);

}  // namespace zeroplan

#endif  // ZEROPLAN_PERF_CURVE_HPP_
