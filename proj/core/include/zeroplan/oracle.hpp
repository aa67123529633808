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

#ifndef ZEROPLAN_ORACLE_HPP_
#define ZEROPLAN_ORACLE_HPP_

#include <cstdint>
#include <vector>

namespace zeroplan {

/// Exhaustive-search result on a small instance.
struct OracleResult {
  std::vector<std::int64_t> best_assignment;
  double best_time = 0.0;       // min iteration time T (0/1) or wall time (2/3)
  double best_objective = 0.0;  // min weighted-idle objective (0/1); wall time (2/3)
  std::int64_t best_gas = 1;
  std::uint64_t enumeration_count = 0;
};

/// Enumerates every composition of gbs into per-device totals within caps
/// and reports the minimum iteration time (t_i = assigned_i / speed_i) plus,
/// separately, the minimum speed-weighted idle objective. Refuses instances
/// beyond n <= 4,
/// gbs <= 32.
OracleResult brute_force_zero01(std::int64_t gbs,
                                const std::vector<double>& speeds,
                                const std::vector<std::int64_t>& caps);

/// Enumerates every per-micro-step assignment (b_1..b_n) within caps with
/// gas = ceil(gbs / micro) and reports the minimum wall time
/// (max_i step_time_i(b_i) + comm_per_step) * gas. step_times[i][b-1] is
/// device i's step time at batch b. Refuses instances beyond n <= 3,
/// caps <= 8, gbs <= 24.
OracleResult brute_force_zero23(
    std::int64_t gbs, const std::vector<std::vector<double>>& step_times,
    const std::vector<std::int64_t>& caps, double comm_per_step);

}  // namespace zeroplan

#endif  // ZEROPLAN_ORACLE_HPP_
