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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "zeroplan/spline.hpp"

namespace {

std::vector<zeroplan::SamplePoint> make_points(int count) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> value(0.1, 100.0);
  std::vector<zeroplan::SamplePoint> points;
  for (int i = 0; i < count; ++i) {
    points.push_back({static_cast<double>(i + 1), value(rng)});
  }
  return points;
}

void BM_SplineFit(benchmark::State& state) {
  const auto points = make_points(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(zeroplan::fit_natural_spline(points));
  }
}
BENCHMARK(BM_SplineFit)->Arg(8)->Arg(64)->Arg(512);

void BM_SplineEval(benchmark::State& state) {
  const auto spline = zeroplan::fit_natural_spline(make_points(64));
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spline.eval(x));
    x += 0.37;
    if (x > 64.0) x -= 63.0;
  }
}
BENCHMARK(BM_SplineEval);

}  // namespace
