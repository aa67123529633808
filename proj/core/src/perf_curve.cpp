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

#include "zeroplan/perf_curve.hpp"

#include <algorithm>
#include <string>

#include "zeroplan/error.hpp"

namespace zeroplan {

double PerfCurve::speed_at(double batch) const {
  const double raw =
      spline_ ? spline_->eval(batch) : constant_speed_;
  return std::max(raw, kSpeedFloor);
}

double PerfCurve::predict_step_time(std::int64_t b) const {
  if (b < 1 || b > mbs_) {
    throw InvalidInputError("batch size " + std::to_string(b) +
                            " outside [1, " + std::to_string(mbs_) + "]");
  }
  return times_[static_cast<std::size_t>(b - 1)];
}

std::int64_t PerfCurve::find_max_batch_within_time(double t) const {
  for (std::int64_t b = mbs_; b >= 1; --b) {
    if (times_[static_cast<std::size_t>(b - 1)] <= t) return b;
  }
  return 0;
}

PerfCurve build_curve(std::vector<BatchSample> samples, std::int64_t mbs,
                      int device_id) {
  if (samples.empty()) {
    throw InvalidInputError("build_curve requires at least one sample");
  }
  if (mbs < 1) {
    throw InvalidInputError("build_curve requires mbs >= 1");
  }
  std::sort(samples.begin(), samples.end(),
            [](const BatchSample& lhs, const BatchSample& rhs) {
              return lhs.batch < rhs.batch;
            });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].batch < 1 || samples[i].batch > mbs) {
      throw InvalidInputError("sample batch size " +
                              std::to_string(samples[i].batch) +
                              " outside [1, mbs]");
    }
    if (samples[i].time <= 0.0) {
      throw InvalidInputError("sample step time must be positive");
    }
    if (i > 0 && samples[i].batch == samples[i - 1].batch) {
      throw InvalidInputError("duplicate sample batch size " +
                              std::to_string(samples[i].batch));
    }
  }

  PerfCurve curve;
  curve.device_id_ = device_id;
  curve.mbs_ = mbs;
  curve.samples_ = samples;

  if (samples.size() == 1) {
    curve.constant_speed_ =
        static_cast<double>(samples[0].batch) / samples[0].time;
  } else {
    std::vector<SamplePoint> points;
    points.reserve(samples.size());
    for (const BatchSample& s : samples) {
      points.push_back(SamplePoint{static_cast<double>(s.batch),
                                   static_cast<double>(s.batch) / s.time});
    }
    curve.spline_ = fit_natural_spline(std::move(points));
  }

  curve.speeds_.resize(static_cast<std::size_t>(mbs));
  curve.times_.resize(static_cast<std::size_t>(mbs));
  std::int64_t peak_at = 1;
  for (std::int64_t b = 1; b <= mbs; ++b) {
    const double speed = curve.speed_at(static_cast<double>(b));
    curve.speeds_[static_cast<std::size_t>(b - 1)] = speed;
    curve.times_[static_cast<std::size_t>(b - 1)] =
        static_cast<double>(b) / speed;
    if (speed > curve.peak_speed_) {
      curve.peak_speed_ = speed;
      peak_at = b;
    }
  }

  // Maximal contiguous interval around the argmax whose speeds stay within
  // kPeakEpsilon of the peak.
  const double floor_speed = (1.0 - PerfCurve::kPeakEpsilon) * curve.peak_speed_;
  std::int64_t lo = peak_at;
  std::int64_t hi = peak_at;
  while (lo > 1 && curve.speeds_[static_cast<std::size_t>(lo - 2)] >= floor_speed) {
    --lo;
  }
  while (hi < mbs && curve.speeds_[static_cast<std::size_t>(hi)] >= floor_speed) {
    ++hi;
  }
  curve.peak_range_ = PerfCurve::PeakRange{lo, hi};
  return curve;
}

std::vector<PerfCurve> build_curves(const ProfileResult& profile) {
  std::vector<PerfCurve> curves;
  curves.reserve(profile.devices.size());
  for (const DeviceProfile& device : profile.devices) {
    curves.push_back(build_curve(device.samples, device.mbs, device.device_id));
  }
  return curves;
}

}  // namespace zeroplan
