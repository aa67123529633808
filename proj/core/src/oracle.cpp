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

#include "zeroplan/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "zeroplan/error.hpp"

namespace zeroplan {

namespace {

std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  return (num + den - 1) / den;
}

}  // namespace

OracleResult brute_force_zero01(std::int64_t gbs,
                                const std::vector<double>& speeds,
                                const std::vector<std::int64_t>& caps) {
  const std::size_t n = speeds.size();
  if (n == 0 || n != caps.size()) {
    throw InvalidInputError("speeds and caps must be non-empty and equal length");
  }
  if (n > 4 || gbs > 32 || gbs < 0) {
    throw InvalidInputError("instance too large for brute force (n <= 4, gbs <= 32)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (speeds[i] <= 0.0) {
      throw InvalidInputError("speeds must be positive");
    }
    if (caps[i] < 0) {
      throw InvalidInputError("caps must be >= 0");
    }
  }
  if (std::accumulate(caps.begin(), caps.end(), std::int64_t{0}) < gbs) {
    throw InfeasibleError("caps cannot cover gbs");
  }

  OracleResult result;
  result.best_time = std::numeric_limits<double>::infinity();
  result.best_objective = std::numeric_limits<double>::infinity();

  std::vector<std::int64_t> assignment(n, 0);
  std::vector<double> finish(n, 0.0);
  // Depth-first over compositions of gbs within caps.
  const auto visit = [&](const auto& self, std::size_t i,
                         std::int64_t remaining) -> void {
    if (i + 1 == n) {
      if (remaining > caps[i]) return;
      assignment[i] = remaining;
      ++result.enumeration_count;
      double t_max = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        finish[k] = static_cast<double>(assignment[k]) / speeds[k];
        t_max = std::max(t_max, finish[k]);
      }
      double objective = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        objective += (t_max - finish[k]) * speeds[k];
      }
      if (t_max < result.best_time) {
        result.best_time = t_max;
        result.best_assignment = assignment;
      }
      result.best_objective = std::min(result.best_objective, objective);
      return;
    }
    const std::int64_t upper = std::min(caps[i], remaining);
    for (std::int64_t v = 0; v <= upper; ++v) {
      assignment[i] = v;
      self(self, i + 1, remaining - v);
    }
  };
  visit(visit, 0, gbs);
  return result;
}

OracleResult brute_force_zero23(
    std::int64_t gbs, const std::vector<std::vector<double>>& step_times,
    const std::vector<std::int64_t>& caps, double comm_per_step) {
  const std::size_t n = step_times.size();
  if (n == 0 || n != caps.size()) {
    throw InvalidInputError(
        "step_times and caps must be non-empty and equal length");
  }
  if (n > 3 || gbs > 24 || gbs < 1) {
    throw InvalidInputError(
        "instance too large for brute force (n <= 3, gbs <= 24)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (caps[i] < 0 || caps[i] > 8) {
      throw InvalidInputError("caps must be in [0, 8]");
    }
    if (static_cast<std::int64_t>(step_times[i].size()) < caps[i]) {
      throw InvalidInputError("step_times[" + std::to_string(i) +
                              "] shorter than its cap");
    }
  }
  if (comm_per_step < 0.0) {
    throw InvalidInputError("comm_per_step must be >= 0");
  }

  OracleResult result;
  result.best_time = std::numeric_limits<double>::infinity();

  std::vector<std::int64_t> b(n, 0);
  // Odometer over all assignments in [0, cap_i]^n.
  while (true) {
    std::int64_t micro = 0;
    double step_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      micro += b[i];
      if (b[i] > 0) {
        step_max =
            std::max(step_max, step_times[i][static_cast<std::size_t>(b[i] - 1)]);
      }
    }
    if (micro > 0) {
      ++result.enumeration_count;
      // Any gas above ceil(gbs/micro) is strictly dominated.
      const std::int64_t gas = ceil_div(gbs, micro);
      const double wall = (step_max + comm_per_step) * static_cast<double>(gas);
      if (wall < result.best_time) {
        result.best_time = wall;
        result.best_objective = wall;
        result.best_assignment = b;
        result.best_gas = gas;
      }
    }
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (b[i] < caps[i]) {
        ++b[i];
        std::fill(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(i), 0);
        break;
      }
    }
    if (i == n) break;
  }

  if (result.best_assignment.empty()) {
    throw InfeasibleError("all caps are zero; no feasible micro-step");
  }
  return result;
}

}  // namespace zeroplan
