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

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "zeroplan/error.hpp"

namespace {

using namespace zeroplan;

std::vector<BatchSample> affine_samples(const std::vector<std::int64_t>& batches,
                                        double c0, double c1) {
  std::vector<BatchSample> samples;
  for (const std::int64_t b : batches) {
    samples.push_back(BatchSample{b, c0 + c1 * static_cast<double>(b)});
  }
  return samples;
}

}  // namespace

TEST_CASE("curve over affine samples peaks at the max batch") {
  const PerfCurve curve =
      build_curve(affine_samples({1, 2, 4, 8}, 0.1, 0.05), 8);
  CHECK(curve.peak_speed() == doctest::Approx(16.0).epsilon(1e-9));
  CHECK(curve.peak_range().hi == 8);
  CHECK(curve.speed_at(8.0) == doctest::Approx(16.0).epsilon(1e-9));
}

TEST_CASE("single sample degenerates to a constant curve") {
  const PerfCurve curve = build_curve({BatchSample{1, 0.2}}, 1);
  CHECK(curve.peak_speed() == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(curve.peak_range().lo == 1);
  CHECK(curve.peak_range().hi == 1);
  CHECK_FALSE(curve.spline().has_value());
  CHECK(curve.predict_step_time(1) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("predicted step time inverts the speed transform") {
  const PerfCurve constant = build_curve({BatchSample{1, 0.2}}, 8);
  CHECK(constant.predict_step_time(3) == doctest::Approx(0.6).epsilon(1e-12));

  const PerfCurve curve =
      build_curve(affine_samples({1, 2, 4, 8}, 0.1, 0.05), 8);
  CHECK(curve.predict_step_time(8) == doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS(curve.predict_step_time(0), InvalidInputError);
  CHECK_THROWS_AS(curve.predict_step_time(9), InvalidInputError);
}

TEST_CASE("find_max_batch_within_time on the affine curve") {
  // Sampling every integer makes the spline reproduce the latent times
  // exactly at each batch size.
  const PerfCurve curve =
      build_curve(affine_samples({1, 2, 3, 4, 5, 6, 7, 8}, 0.1, 0.05), 8);
  CHECK(curve.find_max_batch_within_time(0.35) == 5);
  CHECK(curve.find_max_batch_within_time(10.0) == 8);
  CHECK(curve.find_max_batch_within_time(0.14) == 0);
  CHECK(curve.find_max_batch_within_time(0.0) == 0);
}

TEST_CASE("knot fidelity: curve speed equals sample speed at every knot") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> c0_dist(0.01, 0.5);
  std::uniform_real_distribution<double> c1_dist(0.001, 0.2);
  std::uniform_int_distribution<std::int64_t> mbs_dist(2, 256);
  for (int trial = 0; trial < 100; ++trial) {
    const double c0 = c0_dist(rng);
    const double c1 = c1_dist(rng);
    const std::int64_t mbs = mbs_dist(rng);
    std::vector<std::int64_t> batches;
    for (std::int64_t b = 1; b <= mbs; b = b * 2) batches.push_back(b);
    if (batches.back() != mbs) batches.push_back(mbs);
    const PerfCurve curve = build_curve(affine_samples(batches, c0, c1), mbs);
    for (const std::int64_t b : batches) {
      const double sample_speed =
          static_cast<double>(b) / (c0 + c1 * static_cast<double>(b));
      CHECK(std::fabs(curve.speed_at(static_cast<double>(b)) - sample_speed) <=
            1e-9 * sample_speed);
    }
  }
}

TEST_CASE("peak range matches a brute-force integer scan") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> c0_dist(0.01, 0.5);
  std::uniform_real_distribution<double> c1_dist(0.001, 0.2);
  std::uniform_int_distribution<std::int64_t> mbs_dist(1, 128);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t mbs = mbs_dist(rng);
    std::vector<std::int64_t> batches;
    for (std::int64_t b = 1; b <= mbs; b = b * 2) batches.push_back(b);
    if (batches.back() != mbs) batches.push_back(mbs);
    const PerfCurve curve =
        build_curve(affine_samples(batches, c0_dist(rng), c1_dist(rng)), mbs);

    double peak = 0.0;
    for (std::int64_t b = 1; b <= mbs; ++b) {
      peak = std::max(peak, curve.speed_at(static_cast<double>(b)));
    }
    CHECK(curve.peak_speed() == doctest::Approx(peak).epsilon(1e-12));

    const double floor_speed = (1.0 - PerfCurve::kPeakEpsilon) * peak;
    const PerfCurve::PeakRange range = curve.peak_range();
    CHECK(range.lo >= 1);
    CHECK(range.hi <= mbs);
    for (std::int64_t b = range.lo; b <= range.hi; ++b) {
      CHECK(curve.speed_at(static_cast<double>(b)) >= floor_speed - 1e-12);
    }
    // The interval is maximal around the peak.
    if (range.lo > 1) {
      CHECK(curve.speed_at(static_cast<double>(range.lo - 1)) < floor_speed);
    }
    if (range.hi < mbs) {
      CHECK(curve.speed_at(static_cast<double>(range.hi + 1)) < floor_speed);
    }
  }
}

TEST_CASE("find and predict are mutually consistent") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> c0_dist(0.01, 0.5);
  std::uniform_real_distribution<double> c1_dist(0.001, 0.2);
  std::uniform_real_distribution<double> t_dist(0.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t mbs = 64;
    std::vector<std::int64_t> batches = {1, 2, 4, 8, 16, 32, 64};
    const PerfCurve curve =
        build_curve(affine_samples(batches, c0_dist(rng), c1_dist(rng)), mbs);
    for (int q = 0; q < 20; ++q) {
      const double t = t_dist(rng);
      const std::int64_t b = curve.find_max_batch_within_time(t);
      if (b == 0) {
        CHECK(curve.predict_step_time(1) > t);
        continue;
      }
      CHECK(curve.predict_step_time(b) <= t);
      if (b < mbs) {
        // No larger batch fits: everything above b misses t.
        for (std::int64_t above = b + 1; above <= mbs; ++above) {
          CHECK(curve.predict_step_time(above) > t);
        }
      }
    }
  }
}

TEST_CASE("build_curve input validation") {
  CHECK_THROWS_AS(build_curve({}, 4), InvalidInputError);
  CHECK_THROWS_AS(build_curve({BatchSample{5, 0.1}}, 4), InvalidInputError);
  CHECK_THROWS_AS(build_curve({BatchSample{1, 0.0}}, 4), InvalidInputError);
  CHECK_THROWS_AS(
      build_curve({BatchSample{1, 0.1}, BatchSample{1, 0.2}}, 4),
      InvalidInputError);
  CHECK_THROWS_AS(build_curve({BatchSample{1, 0.1}}, 0), InvalidInputError);
}
