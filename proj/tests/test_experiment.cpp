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

#include "zeroplan/experiment.hpp"

#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "zeroplan/error.hpp"

namespace {

using namespace zeroplan;
using nlohmann::json;

const char* kMinimalSpec = R"({
  "cluster": {
    "devices": [
      {"total_mem": 17179869184, "act_mem_per_batch": 268435456,
       "compute_fixed": 0.05, "compute_per_batch": 0.01}
    ],
    "link_bandwidths": [1e9]
  },
  "model": {"param_count": 5e8, "hidden_size": 1024, "num_layers": 8},
  "gbs": 16
})";

// Two fast and two slow devices behind one shared low-bandwidth link.
const char* kMixedClusterSpec = R"({
  "cluster": {
    "devices": [
      {"name": "fast0", "total_mem": 17179869184, "act_mem_per_batch": 268435456,
       "compute_fixed": 0.02, "compute_per_batch": 0.01},
      {"name": "fast1", "total_mem": 17179869184, "act_mem_per_batch": 268435456,
       "compute_fixed": 0.02, "compute_per_batch": 0.01},
      {"name": "slow0", "total_mem": 17179869184, "act_mem_per_batch": 268435456,
       "compute_fixed": 0.02, "compute_per_batch": 0.02},
      {"name": "slow1", "total_mem": 17179869184, "act_mem_per_batch": 268435456,
       "compute_fixed": 0.02, "compute_per_batch": 0.02}
    ],
    "link_bandwidths": [12e9, 12e9, 12e9, 12e9],
    "link_latency": 1e-4
  },
  "model": {"param_count": 5e8, "hidden_size": 1024, "num_layers": 8},
  "gbs": 64,
  "stage": 0,
  "iterations": 10,
  "seed": 42
})";

}  // namespace

TEST_CASE("minimal spec parses with defaults applied") {
  const ExperimentSpec spec = parse_spec(kMinimalSpec);
  CHECK(spec.gbs == 16);
  CHECK_FALSE(spec.stage.has_value());  // auto
  CHECK(spec.iterations == 50);
  CHECK(spec.seed == 0);
  CHECK(spec.format == OutputFormat::kObject);
  CHECK(spec.cluster.devices.size() == 1);
  CHECK(spec.cluster.devices[0].name == "gpu0");
  CHECK(spec.model.bytes_per_param == 2.0);
  CHECK(spec.model.optimizer_state_multiplier == 16.0);
}

TEST_CASE("validation errors name the offending field") {
  std::string bad = kMinimalSpec;
  const auto pos = bad.find("17179869184");
  bad.replace(pos, 11, "-5");
  try {
    parse_spec(bad);
    FAIL("expected a validation error");
  } catch (const InvalidInputError& e) {
    CHECK(std::string(e.what()).find("total_mem") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry the line number") {
  try {
    parse_spec("{\n  \"cluster\": oops\n}");
    FAIL("expected a parse error");
  } catch (const InvalidInputError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("unknown fields are rejected by name") {
  std::string extra = kMinimalSpec;
  extra.insert(extra.rfind('}'), ", \"unknown_knob\": 3\n");
  try {
    parse_spec(extra);
    FAIL("expected a validation error");
  } catch (const InvalidInputError& e) {
    CHECK(std::string(e.what()).find("unknown_knob") != std::string::npos);
  }
}

TEST_CASE("stage and gbs validation") {
  std::string bad_stage = kMinimalSpec;
  bad_stage.insert(bad_stage.rfind('}'), ", \"stage\": 7\n");
  CHECK_THROWS_AS(parse_spec(bad_stage), InvalidInputError);

  std::string bad_gbs = kMinimalSpec;
  const auto pos = bad_gbs.find("\"gbs\": 16");
  bad_gbs.replace(pos, 9, "\"gbs\": 0");
  CHECK_THROWS_AS(parse_spec(bad_gbs), InvalidInputError);
}

TEST_CASE("a mixed four-device spec parses") {
  const ExperimentSpec spec = parse_spec(kMixedClusterSpec);
  CHECK(spec.cluster.devices.size() == 4);
  CHECK(spec.stage == ZeroStage::kStage0);
  CHECK(spec.cluster.devices[2].compute_per_batch ==
        2.0 * spec.cluster.devices[0].compute_per_batch);
  CHECK(spec.seed == 42);
  CHECK(spec.cluster.seed == 42);
}

TEST_CASE("specs round-trip through serialization") {
  const ExperimentSpec spec = parse_spec(kMixedClusterSpec);
  const ExperimentSpec again = parse_spec(serialize_spec(spec));
  CHECK(again == spec);

  const ExperimentSpec minimal = parse_spec(kMinimalSpec);
  CHECK(parse_spec(serialize_spec(minimal)) == minimal);
}

TEST_CASE("identical spec and seed produce byte-identical reports") {
  const ExperimentSpec spec = parse_spec(kMixedClusterSpec);
  for (const Command command :
       {Command::kProfile, Command::kPlan, Command::kSimulate,
        Command::kCompare}) {
    const PipelineOutcome a = run_pipeline(spec, command);
    const PipelineOutcome b = run_pipeline(spec, command);
    CHECK(a.exit_code == 0);
    CHECK(a.report == b.report);
  }
}

TEST_CASE("the simulate report embeds the same plan the plan command emits") {
  const ExperimentSpec spec = parse_spec(kMixedClusterSpec);
  const json plan_report = json::parse(run_pipeline(spec, Command::kPlan).report);
  const json sim_report =
      json::parse(run_pipeline(spec, Command::kSimulate).report);
  CHECK(plan_report.at("plan") == sim_report.at("plan"));
}

TEST_CASE("a homogeneous spec plans an even split with zero objective") {
  std::string homogeneous = kMixedClusterSpec;
  // Make the two slow devices as fast as the others.
  std::size_t pos;
  while ((pos = homogeneous.find("0.02, \"compute_per_batch\": 0.02")) !=
         std::string::npos) {
    homogeneous.replace(pos, 31, "0.02, \"compute_per_batch\": 0.01");
  }
  const ExperimentSpec spec = parse_spec(homogeneous);
  const json report = json::parse(run_pipeline(spec, Command::kPlan).report);
  const json& plan = report.at("plan");
  CHECK(plan.at("objective").get<double>() == 0.0);
  for (const json& dev : plan.at("devices")) {
    CHECK(dev.at("gmbs").get<std::int64_t>() == 16);  // 64 / 4
  }
}

TEST_CASE("planner beats uniform on the heterogeneous example") {
  const ExperimentSpec spec = parse_spec(kMixedClusterSpec);
  const json report = json::parse(run_pipeline(spec, Command::kCompare).report);
  CHECK(report.at("speedup").get<double>() >= 1.0);
}

TEST_CASE("model too large surfaces as InfeasibleError") {
  std::string huge = kMinimalSpec;
  const auto pos = huge.find("5e8");
  huge.replace(pos, 3, "5e12");
  const ExperimentSpec spec = parse_spec(huge);
  CHECK_THROWS_AS(run_pipeline(spec, Command::kProfile), InfeasibleError);
}

TEST_CASE("check passes on a healthy build") {
  ExperimentSpec spec = parse_spec(kMinimalSpec);
  spec.seed = 7;
  const PipelineOutcome outcome = run_pipeline(spec, Command::kCheck, 20);
  CHECK(outcome.exit_code == 0);
  const json report = json::parse(outcome.report);
  CHECK(report.at("passed").get<bool>());
}

TEST_CASE("tabular reports render one row per record") {
  ExperimentSpec spec = parse_spec(kMixedClusterSpec);
  spec.format = OutputFormat::kTable;
  const PipelineOutcome plan_out = run_pipeline(spec, Command::kPlan);
  CHECK(plan_out.report.find("device\tb\tgmbs\tlbs") != std::string::npos);
  const PipelineOutcome compare_out = run_pipeline(spec, Command::kCompare);
  CHECK(compare_out.report.find("speedup") != std::string::npos);

  // Tables are deterministic too.
  CHECK(run_pipeline(spec, Command::kPlan).report == plan_out.report);
}

TEST_CASE("command names map to commands") {
  CHECK(command_from_name("profile") == Command::kProfile);
  CHECK(command_from_name("check") == Command::kCheck);
  CHECK_THROWS_AS(command_from_name("train"), InvalidInputError);
}
