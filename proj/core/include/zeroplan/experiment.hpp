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

#ifndef ZEROPLAN_EXPERIMENT_HPP_
#define ZEROPLAN_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "zeroplan/hardware.hpp"
#include "zeroplan/zero_stage.hpp"

namespace zeroplan {

enum class OutputFormat {
  kObject,  // structured JSON document
  kTable,   // tab-separated rows for plotting
};

/// Everything one pipeline run needs: the simulated cluster, the model, the
/// global batch size, and run controls. Loaded from a JSON spec file; field
/// names in the file match the struct members (see README for the schema).
struct ExperimentSpec {
  ClusterGroundTruth cluster;
  ModelSpec model;
  std::int64_t gbs = 1;
  std::optional<ZeroStage> stage;  // nullopt = auto (escalate from stage 0)
  int iterations = 50;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::kObject;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Parses and validates a spec document. Parse errors carry the line and
/// column; semantic errors name the offending field path.
ExperimentSpec parse_spec(const std::string& text);

/// Inverse of parse_spec; parse(serialize(spec)) == spec.
std::string serialize_spec(const ExperimentSpec& spec);

enum class Command {
  kProfile,
  kPlan,
  kSimulate,
  kCompare,
  kCheck,
};

Command command_from_name(const std::string& name);

/// Exit codes shared by the library pipeline and the CLI binary.
struct ExitCode {
  static constexpr int kOk = 0;
  static constexpr int kValidationError = 1;
  static constexpr int kInfeasible = 2;
  static constexpr int kCheckFailure = 3;
};

struct PipelineOutcome {
  int exit_code = ExitCode::kOk;
  std::string report;  // JSON document or TSV table, per spec.format
};

/// Runs one pipeline command against the spec and renders its report.
/// profile/plan/simulate/compare run the stages of the pipeline they need;
/// check runs randomized planner-vs-oracle comparisons on `check_instances`
/// small instances and returns exit code 3 on a tolerance breach.
/// Infeasible/model-too-large conditions surface as InfeasibleError and
/// malformed specs as InvalidInputError; callers map them to exit codes.
PipelineOutcome run_pipeline(const ExperimentSpec& spec, Command command,
                             int check_instances = 200);

}  // namespace zeroplan

#endif  // ZEROPLAN_EXPERIMENT_HPP_
