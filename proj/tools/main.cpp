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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "zeroplan/error.hpp"
#include "zeroplan/experiment.hpp"

namespace {

struct CliOptions {
  std::string spec_path;
  std::optional<std::int64_t> gbs;
  std::optional<std::string> stage;
  std::optional<int> iterations;
  std::optional<std::int64_t> seed;
  std::string out_path;
  std::optional<std::string> format;
};

void add_common_options(CLI::App* cmd, CliOptions& options) {
  cmd->add_option("--spec", options.spec_path, "Path to the experiment spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--gbs", options.gbs, "Override the global batch size");
  cmd->add_option("--stage", options.stage, "Override the ZeRO stage (0|1|2|3|auto)");
  cmd->add_option("--iterations", options.iterations,
                  "Override the iteration count (for check: instance count)");
  cmd->add_option("--seed", options.seed, "Override the random seed");
  cmd->add_option("--out", options.out_path,
                  "Write the report here instead of stdout");
  cmd->add_option("--format", options.format, "Report format (obj|table)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw zeroplan::InvalidInputError("cannot open spec file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

zeroplan::ExperimentSpec load_spec(const CliOptions& options) {
  zeroplan::ExperimentSpec spec = zeroplan::parse_spec(read_file(options.spec_path));
  if (options.gbs) {
    if (*options.gbs < 1) {
      throw zeroplan::InvalidInputError("gbs: must be >= 1");
    }
    spec.gbs = *options.gbs;
  }
  if (options.stage) {
    if (*options.stage == "auto") {
      spec.stage = std::nullopt;
    } else if (options.stage->size() == 1 && *options.stage >= "0" &&
               *options.stage <= "3") {
      spec.stage = zeroplan::stage_from_index((*options.stage)[0] - '0');
    } else {
      throw zeroplan::InvalidInputError("stage: must be 0, 1, 2, 3 or auto");
    }
  }
  if (options.iterations) {
    if (*options.iterations < 1) {
      throw zeroplan::InvalidInputError("iterations: must be >= 1");
    }
    spec.iterations = *options.iterations;
  }
  if (options.seed) {
    if (*options.seed < 0) {
      throw zeroplan::InvalidInputError("seed: must be >= 0");
    }
    spec.seed = static_cast<std::uint64_t>(*options.seed);
    spec.cluster.seed = spec.seed;
  }
  if (options.format) {
    if (*options.format == "obj") {
      spec.format = zeroplan::OutputFormat::kObject;
    } else if (*options.format == "table") {
      spec.format = zeroplan::OutputFormat::kTable;
    } else {
      throw zeroplan::InvalidInputError("format: must be \"obj\" or \"table\"");
    }
  }
  return spec;
}

int run(const CliOptions& options, zeroplan::Command command) {
  const zeroplan::ExperimentSpec spec = load_spec(options);
  // check defaults to 200 instances unless --iterations overrides it.
  const int check_instances = options.iterations ? *options.iterations : 200;
  const zeroplan::PipelineOutcome outcome =
      zeroplan::run_pipeline(spec, command, check_instances);
  if (options.out_path.empty()) {
    std::cout << outcome.report;
  } else {
    std::ofstream out(options.out_path, std::ios::binary);
    if (!out) {
      throw zeroplan::InvalidInputError("cannot open output file: " +
                                        options.out_path);
    }
    out << outcome.report;
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Batch-allocation planner and simulator for heterogeneous ZeRO "
      "clusters"};
  app.require_subcommand(1);

  CliOptions options;
  zeroplan::Command command = zeroplan::Command::kProfile;
  for (const auto& [name, description] :
       {std::pair<const char*, const char*>{"profile",
                                            "Discover per-device max batch "
                                            "sizes and step-time samples"},
        {"plan", "Search the optimal batch allocation"},
        {"simulate", "Simulate the planned and uniform allocations"},
        {"compare", "Report the planner-vs-uniform speedup"},
        {"check", "Compare the planner against the brute-force oracle"}}) {
    CLI::App* cmd = app.add_subcommand(name, description);
    add_common_options(cmd, options);
    cmd->callback([&command, name = std::string(name)]() {
      command = zeroplan::command_from_name(name);
    });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run(options, command);
  } catch (const zeroplan::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return zeroplan::ExitCode::kValidationError;
  } catch (const zeroplan::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return zeroplan::ExitCode::kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 10;
  }
}
