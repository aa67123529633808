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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zeroplan/comm.hpp"
#include "zeroplan/error.hpp"
#include "zeroplan/oracle.hpp"
#include "zeroplan/perf_curve.hpp"
#include "zeroplan/planner.hpp"
#include "zeroplan/profiler.hpp"
#include "zeroplan/simulator.hpp"

namespace zeroplan {

namespace {

using json = nlohmann::ordered_json;

// --- spec parsing -----------------------------------------------------------

[[noreturn]] void fail_field(const std::string& path, const std::string& why) {
  throw InvalidInputError(path + ": " + why);
}

const json& require_member(const json& obj, const std::string& path,
                           const std::string& key) {
  if (!obj.is_object()) fail_field(path, "must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail_field(path + "." + key, "missing required field");
  return *it;
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) fail_field(path, "must be a number");
  return value.get<double>();
}

std::int64_t as_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) fail_field(path, "must be an integer");
  return value.get<std::int64_t>();
}

double member_number(const json& obj, const std::string& path,
                     const std::string& key) {
  return as_number(require_member(obj, path, key), path + "." + key);
}

double member_number_or(const json& obj, const std::string& path,
                        const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return as_number(obj.at(key), path + "." + key);
}

std::int64_t member_integer(const json& obj, const std::string& path,
                            const std::string& key) {
  return as_integer(require_member(obj, path, key), path + "." + key);
}

std::int64_t member_integer_or(const json& obj, const std::string& path,
                               const std::string& key, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  return as_integer(obj.at(key), path + "." + key);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end()) {
      fail_field(path + "." + key, "unknown field");
    }
  }
}

DeviceGroundTruth parse_device(const json& obj, int index) {
  const std::string path = "cluster.devices[" + std::to_string(index) + "]";
  reject_unknown_keys(obj, path,
                      {"name", "total_mem", "act_mem_per_batch",
                       "compute_fixed", "compute_per_batch", "optimizer_time"});
  DeviceGroundTruth device;
  device.id = index;
  if (obj.contains("name")) {
    if (!obj.at("name").is_string()) fail_field(path + ".name", "must be a string");
    device.name = obj.at("name").get<std::string>();
  } else {
    device.name = "gpu" + std::to_string(index);
  }
  device.total_mem = member_number(obj, path, "total_mem");
  device.act_mem_per_batch = member_number(obj, path, "act_mem_per_batch");
  device.compute_fixed = member_number(obj, path, "compute_fixed");
  device.compute_per_batch = member_number(obj, path, "compute_per_batch");
  device.optimizer_time = member_number_or(obj, path, "optimizer_time", 0.0);
  return device;
}

ClusterGroundTruth parse_cluster(const json& obj) {
  reject_unknown_keys(obj, "cluster",
                      {"devices", "link_bandwidths", "link_latency", "jitter"});
  ClusterGroundTruth cluster;
  const json& devices = require_member(obj, "cluster", "devices");
  if (!devices.is_array() || devices.empty()) {
    fail_field("cluster.devices", "must be a non-empty array");
  }
  for (std::size_t i = 0; i < devices.size(); ++i) {
    cluster.devices.push_back(
        parse_device(devices[i], static_cast<int>(i)));
  }
  const json& bandwidths = require_member(obj, "cluster", "link_bandwidths");
  if (!bandwidths.is_array()) {
    fail_field("cluster.link_bandwidths", "must be an array");
  }
  for (std::size_t i = 0; i < bandwidths.size(); ++i) {
    cluster.link_bandwidths.push_back(as_number(
        bandwidths[i], "cluster.link_bandwidths[" + std::to_string(i) + "]"));
  }
  cluster.link_latency = member_number_or(obj, "cluster", "link_latency", 0.0);
  cluster.jitter = member_number_or(obj, "cluster", "jitter", 0.0);
  return cluster;
}

ModelSpec parse_model(const json& obj) {
  reject_unknown_keys(obj, "model",
                      {"param_count", "hidden_size", "num_layers",
                       "bytes_per_param", "optimizer_state_multiplier"});
  ModelSpec model;
  model.param_count = member_number(obj, "model", "param_count");
  model.hidden_size = member_integer(obj, "model", "hidden_size");
  model.num_layers = member_integer(obj, "model", "num_layers");
  model.bytes_per_param = member_number_or(obj, "model", "bytes_per_param", 2.0);
  model.optimizer_state_multiplier =
      member_number_or(obj, "model", "optimizer_state_multiplier", 16.0);
  return model;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports the line and column of the syntax error.
    throw InvalidInputError(std::string("spec: ") + e.what());
  }
  if (!doc.is_object()) fail_field("spec", "must be a JSON object");
  reject_unknown_keys(doc, "spec",
                      {"cluster", "model", "gbs", "stage", "iterations",
                       "seed", "format"});

  ExperimentSpec spec;
  spec.cluster = parse_cluster(require_member(doc, "spec", "cluster"));
  spec.model = parse_model(require_member(doc, "spec", "model"));
  spec.gbs = member_integer(doc, "spec", "gbs");
  if (spec.gbs < 1) fail_field("gbs", "must be >= 1");

  if (doc.contains("stage")) {
    const json& stage = doc.at("stage");
    if (stage.is_string()) {
      if (stage.get<std::string>() != "auto") {
        fail_field("stage", "must be 0, 1, 2, 3 or \"auto\"");
      }
      spec.stage = std::nullopt;
    } else {
      spec.stage = stage_from_index(
          static_cast<int>(as_integer(stage, "stage")));
    }
  }

  const std::int64_t iterations =
      member_integer_or(doc, "spec", "iterations", 50);
  if (iterations < 1) fail_field("iterations", "must be >= 1");
  spec.iterations = static_cast<int>(iterations);

  const std::int64_t seed = member_integer_or(doc, "spec", "seed", 0);
  if (seed < 0) fail_field("seed", "must be >= 0");
  spec.seed = static_cast<std::uint64_t>(seed);
  spec.cluster.seed = spec.seed;

  if (doc.contains("format")) {
    if (!doc.at("format").is_string()) fail_field("format", "must be a string");
    const std::string format = doc.at("format").get<std::string>();
    if (format == "obj") {
      spec.format = OutputFormat::kObject;
    } else if (format == "table") {
      spec.format = OutputFormat::kTable;
    } else {
      fail_field("format", "must be \"obj\" or \"table\"");
    }
  }

  spec.cluster.validate();
  spec.model.validate();
  return spec;
}

std::string serialize_spec(const ExperimentSpec& spec) {
  json doc;
  json devices = json::array();
  for (const DeviceGroundTruth& d : spec.cluster.devices) {
    devices.push_back(json{{"name", d.name},
                           {"total_mem", d.total_mem},
                           {"act_mem_per_batch", d.act_mem_per_batch},
                           {"compute_fixed", d.compute_fixed},
                           {"compute_per_batch", d.compute_per_batch},
                           {"optimizer_time", d.optimizer_time}});
  }
  doc["cluster"] = json{{"devices", devices},
                        {"link_bandwidths", spec.cluster.link_bandwidths},
                        {"link_latency", spec.cluster.link_latency},
                        {"jitter", spec.cluster.jitter}};
  doc["model"] = json{
      {"param_count", spec.model.param_count},
      {"hidden_size", spec.model.hidden_size},
      {"num_layers", spec.model.num_layers},
      {"bytes_per_param", spec.model.bytes_per_param},
      {"optimizer_state_multiplier", spec.model.optimizer_state_multiplier}};
  doc["gbs"] = spec.gbs;
  if (spec.stage) {
    doc["stage"] = stage_index(*spec.stage);
  } else {
    doc["stage"] = "auto";
  }
  doc["iterations"] = spec.iterations;
  doc["seed"] = spec.seed;
  doc["format"] = spec.format == OutputFormat::kObject ? "obj" : "table";
  return doc.dump(2) + "\n";
}

Command command_from_name(const std::string& name) {
  if (name == "profile") return Command::kProfile;
  if (name == "plan") return Command::kPlan;
  if (name == "simulate") return Command::kSimulate;
  if (name == "compare") return Command::kCompare;
  if (name == "check") return Command::kCheck;
  throw InvalidInputError("unknown command: " + name);
}

namespace {

// --- report rendering -------------------------------------------------------

json profile_to_json(const ProfileResult& profile,
                     const ClusterGroundTruth& cluster) {
  json devices = json::array();
  for (const DeviceProfile& dev : profile.devices) {
    json samples = json::array();
    for (const BatchSample& s : dev.samples) {
      samples.push_back(json::array({s.batch, s.time}));
    }
    devices.push_back(
        json{{"id", dev.device_id},
             {"name", cluster.devices[static_cast<std::size_t>(dev.device_id)].name},
             {"mbs", dev.mbs},
             {"probes_used", dev.probes_used},
             {"optimizer_time", dev.optimizer_time},
             {"samples", samples}});
  }
  return json{{"effective_stage", stage_index(profile.effective_stage)},
              {"devices", devices}};
}

json plan_to_json(const AllocationPlan& plan) {
  json devices = json::array();
  for (std::size_t i = 0; i < plan.devices.size(); ++i) {
    const DeviceAllocation& dev = plan.devices[i];
    devices.push_back(json{
        {"id", dev.device_id},
        {"b", dev.b},
        {"gmbs", dev.gmbs},
        {"lbs", dev.lbs},
        {"predicted_time", dev.predicted_time},
        {"idle", plan.metrics.idle[i]},
        {"under_utilization", plan.metrics.under_utilization[i]}});
  }
  return json{{"stage", stage_index(plan.stage)},
              {"gbs", plan.gbs},
              {"gas", plan.gas},
              {"predicted_T", plan.metrics.iteration_time},
              {"objective", plan.metrics.objective},
              {"predicted_wall_time", plan.predicted_wall_time},
              {"devices", devices}};
}

json curves_to_json(const std::vector<PerfCurve>& curves) {
  json out = json::array();
  for (const PerfCurve& curve : curves) {
    json knots = json::array();
    for (const BatchSample& s : curve.samples()) {
      knots.push_back(json::array(
          {s.batch, curve.speed_at(static_cast<double>(s.batch))}));
    }
    out.push_back(json{{"device_id", curve.device_id()},
                       {"mbs", curve.mbs()},
                       {"peak_speed", curve.peak_speed()},
                       {"peak_range", json::array({curve.peak_range().lo,
                                                   curve.peak_range().hi})},
                       {"knots", knots}});
  }
  return out;
}

json sim_to_json(const SimReport& sim, const ModelSpec& model) {
  // FLOPs proxy: ~6 FLOPs per parameter per sample. A relative utilization
  // number for plotting, not comparable to hardware TFLOPs figures.
  const double flops_proxy = 6.0 * model.param_count * sim.mean.throughput;
  return json{{"iterations", sim.iterations},
              {"mean",
               json{{"T", sim.mean.iteration_time},
                    {"throughput", sim.mean.throughput},
                    {"flops_proxy", flops_proxy},
                    {"comm_total", sim.mean.comm_total},
                    {"busy", sim.mean.busy},
                    {"idle", sim.mean.idle},
                    {"compute", sim.mean.compute}}},
              {"speedup_vs_baseline", sim.speedup_vs_baseline}};
}

// --- tabular projections ----------------------------------------------------

std::string format_cell(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

std::string to_table(const json& report) {
  std::ostringstream out;
  const std::string command = report.at("command").get<std::string>();
  if (command == "profile") {
    out << "device\tname\tmbs\tbatch\ttime\tspeed\n";
    for (const json& dev : report.at("profile").at("devices")) {
      for (const json& sample : dev.at("samples")) {
        const double batch = sample[0].get<double>();
        const double time = sample[1].get<double>();
        out << dev.at("id") << '\t' << dev.at("name").get<std::string>() << '\t'
            << dev.at("mbs") << '\t' << sample[0] << '\t' << sample[1] << '\t'
            << json(batch / time) << '\n';
      }
    }
  } else if (command == "plan") {
    const json& plan = report.at("plan");
    out << "# stage\t" << plan.at("stage") << "\n# gas\t" << plan.at("gas")
        << "\n# predicted_T\t" << plan.at("predicted_T")
        << "\n# predicted_wall_time\t" << plan.at("predicted_wall_time")
        << "\n# objective\t" << plan.at("objective") << '\n';
    out << "device\tb\tgmbs\tlbs\tpredicted_time\tidle\tunder_utilization\n";
    for (const json& dev : plan.at("devices")) {
      out << dev.at("id") << '\t' << dev.at("b") << '\t' << dev.at("gmbs")
          << '\t' << dev.at("lbs") << '\t' << dev.at("predicted_time") << '\t'
          << dev.at("idle") << '\t' << dev.at("under_utilization") << '\n';
    }
  } else if (command == "simulate") {
    out << "# speedup\t" << report.at("speedup") << '\n';
    out << "plan\tdevice\tbusy\tidle\tcompute\tT\tthroughput\n";
    for (const char* which : {"planner", "uniform"}) {
      const json& sim = report.at(which);
      const json& mean = sim.at("mean");
      for (std::size_t i = 0; i < mean.at("busy").size(); ++i) {
        out << which << '\t' << i << '\t' << format_cell(mean.at("busy")[i])
            << '\t' << format_cell(mean.at("idle")[i]) << '\t'
            << format_cell(mean.at("compute")[i]) << '\t'
            << format_cell(mean.at("T")) << '\t'
            << format_cell(mean.at("throughput")) << '\n';
      }
    }
  } else if (command == "compare") {
    out << "stage\tgbs\tplanner_throughput\tuniform_throughput\tspeedup\n";
    out << report.at("stage") << '\t' << report.at("gbs") << '\t'
        << report.at("planner_throughput") << '\t'
        << report.at("uniform_throughput") << '\t' << report.at("speedup")
        << '\n';
  } else if (command == "check") {
    out << "check\tinstances\tworst\tallowed\tpassed\n";
    for (const char* which : {"zero01", "zero23"}) {
      const json& c = report.at(which);
      out << which << '\t' << c.at("instances") << '\t' << c.at("worst")
          << '\t' << c.at("allowed") << '\t'
          << (c.at("passed").get<bool>() ? "yes" : "no") << '\n';
    }
  }
  return out.str();
}

// --- pipeline stages --------------------------------------------------------

double optimizer_tail_of(const ProfileResult& profile) {
  double tail = 0.0;
  for (const DeviceProfile& dev : profile.devices) {
    tail = std::max(tail, dev.optimizer_time);
  }
  return tail;
}

struct PipelineState {
  ProfileResult profile;
  ZeroStage stage = ZeroStage::kStage0;
  std::vector<PerfCurve> curves;
  CommProfile comm;
  AllocationPlan planner_plan;
  AllocationPlan uniform_plan;
};

PipelineState run_through_plan(const ExperimentSpec& spec) {
  PipelineState state;
  state.profile = profile_cluster(spec.cluster, spec.model, spec.stage);
  state.stage = state.profile.effective_stage;
  state.curves = build_curves(state.profile);
  state.comm = make_comm_profile(spec.model, state.stage, spec.cluster);
  state.planner_plan =
      plan(spec.gbs, state.profile, state.stage, spec.model, spec.cluster);
  state.uniform_plan =
      make_uniform_plan(spec.gbs, state.curves, state.stage, state.comm,
                        optimizer_tail_of(state.profile));
  return state;
}

// --- randomized oracle checks (the `check` command) --------------------------

struct CheckSummary {
  int instances = 0;
  double worst = 0.0;
  double allowed = 0.0;
  bool passed = true;
};

constexpr double kOracleRatioTolerance = 1.05;

// Small random cluster whose devices have exactly the requested max batch
// sizes; byte quantities stay integral so thresholds are exact.
ClusterGroundTruth make_check_cluster(std::mt19937_64& rng, int n,
                                      const std::vector<std::int64_t>& mbs,
                                      const ModelSpec& model, ZeroStage stage) {
  ClusterGroundTruth cluster;
  std::uniform_real_distribution<double> c0_dist(0.01, 0.3);
  std::uniform_real_distribution<double> c1_dist(0.005, 0.2);
  std::uniform_int_distribution<std::int64_t> act_dist(1 << 20, 1 << 26);
  const double resident = resident_state_bytes(model, stage, n);
  for (int i = 0; i < n; ++i) {
    DeviceGroundTruth device;
    device.id = i;
    device.name = "gpu" + std::to_string(i);
    device.act_mem_per_batch = static_cast<double>(act_dist(rng));
    std::uniform_int_distribution<std::int64_t> slack_dist(
        0, static_cast<std::int64_t>(device.act_mem_per_batch) - 1);
    device.total_mem =
        resident +
        device.act_mem_per_batch * static_cast<double>(mbs[static_cast<std::size_t>(i)]) +
        static_cast<double>(slack_dist(rng));
    device.compute_fixed = c0_dist(rng);
    device.compute_per_batch = c1_dist(rng);
    cluster.devices.push_back(device);
    cluster.link_bandwidths.push_back(1e9);
  }
  return cluster;
}

CheckSummary check_zero01(std::mt19937_64& rng, int instances) {
  CheckSummary summary;
  summary.instances = instances;
  std::uniform_int_distribution<int> n_dist(1, 4);
  std::uniform_int_distribution<std::int64_t> gbs_dist(1, 32);
  std::uniform_real_distribution<double> speed_dist(0.5, 4.0);
  for (int k = 0; k < instances; ++k) {
    const int n = n_dist(rng);
    const std::int64_t gbs = gbs_dist(rng);
    std::vector<double> speeds;
    std::vector<std::int64_t> caps(static_cast<std::size_t>(n), gbs);
    std::vector<PerfCurve> curves;
    for (int i = 0; i < n; ++i) {
      const double speed = speed_dist(rng);
      speeds.push_back(speed);
      curves.push_back(build_curve({BatchSample{1, 1.0 / speed}}, gbs, i));
    }
    const AllocationPlan p = plan_zero01(gbs, curves);
    const OracleResult oracle = brute_force_zero01(gbs, speeds, caps);
    const double slack =
        1.0 / *std::min_element(speeds.begin(), speeds.end());
    const double excess =
        (p.metrics.iteration_time - oracle.best_time) / slack;
    summary.worst = std::max(summary.worst, excess);
  }
  summary.allowed = 1.0;  // plan T may exceed oracle T by one batch at most
  summary.passed = summary.worst <= summary.allowed + 1e-9;
  return summary;
}

CheckSummary check_zero23(std::mt19937_64& rng, int instances) {
  CheckSummary summary;
  summary.instances = instances;
  std::uniform_int_distribution<int> n_dist(1, 3);
  std::uniform_int_distribution<std::int64_t> mbs_dist(1, 8);
  std::uniform_int_distribution<std::int64_t> gbs_dist(1, 24);
  std::uniform_real_distribution<double> comm_dist(0.0, 0.5);

  ModelSpec model;
  model.param_count = 1 << 20;
  model.hidden_size = 64;
  model.num_layers = 2;

  for (int k = 0; k < instances; ++k) {
    const int n = n_dist(rng);
    std::vector<std::int64_t> mbs(static_cast<std::size_t>(n));
    for (auto& m : mbs) m = mbs_dist(rng);
    const ZeroStage stage = ZeroStage::kStage3;
    const ClusterGroundTruth cluster =
        make_check_cluster(rng, n, mbs, model, stage);
    const ProfileResult profile = profile_cluster(cluster, model, stage);
    const std::vector<PerfCurve> curves = build_curves(profile);

    CommProfile comm;
    comm.stage = stage;
    comm.time_per_step = comm_dist(rng);

    const std::int64_t gbs = gbs_dist(rng);
    const AllocationPlan p = plan_zero23(gbs, curves, comm);

    std::vector<std::vector<double>> tables;
    std::vector<std::int64_t> caps;
    for (const PerfCurve& curve : curves) {
      tables.push_back(curve.step_times());
      caps.push_back(curve.mbs());
    }
    const OracleResult oracle =
        brute_force_zero23(gbs, tables, caps, comm.time_per_step);

    // Evaluate the plan with the oracle's own cost formula.
    double step_max = 0.0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      if (p.devices[i].b > 0) {
        step_max = std::max(step_max, curves[i].predict_step_time(p.devices[i].b));
      }
    }
    const double plan_wall =
        (step_max + comm.time_per_step) * static_cast<double>(p.gas);
    summary.worst = std::max(summary.worst, plan_wall / oracle.best_time);
  }
  summary.allowed = kOracleRatioTolerance;
  summary.passed = summary.worst <= summary.allowed;
  return summary;
}

}  // namespace

PipelineOutcome run_pipeline(const ExperimentSpec& spec, Command command,
                             int check_instances) {
  spec.cluster.validate();
  spec.model.validate();

  json report;
  int exit_code = ExitCode::kOk;

  switch (command) {
    case Command::kProfile: {
      const ProfileResult profile =
          profile_cluster(spec.cluster, spec.model, spec.stage);
      report = json{{"command", "profile"},
                    {"gbs", spec.gbs},
                    {"seed", spec.seed},
                    {"profile", profile_to_json(profile, spec.cluster)}};
      break;
    }
    case Command::kPlan: {
      const PipelineState state = run_through_plan(spec);
      report = json{{"command", "plan"},
                    {"seed", spec.seed},
                    {"profile", profile_to_json(state.profile, spec.cluster)},
                    {"plan", plan_to_json(state.planner_plan)},
                    {"curves", curves_to_json(state.curves)}};
      break;
    }
    case Command::kSimulate: {
      const PipelineState state = run_through_plan(spec);
      SimReport planner_sim = simulate_run(spec.cluster, spec.model,
                                           state.planner_plan, state.stage,
                                           spec.iterations);
      SimReport uniform_sim = simulate_run(spec.cluster, spec.model,
                                           state.uniform_plan, state.stage,
                                           spec.iterations);
      planner_sim.speedup_vs_baseline =
          planner_sim.mean.throughput / uniform_sim.mean.throughput;
      report = json{{"command", "simulate"},
                    {"seed", spec.seed},
                    {"plan", plan_to_json(state.planner_plan)},
                    {"uniform_plan", plan_to_json(state.uniform_plan)},
                    {"planner", sim_to_json(planner_sim, spec.model)},
                    {"uniform", sim_to_json(uniform_sim, spec.model)},
                    {"speedup", planner_sim.speedup_vs_baseline}};
      break;
    }
    case Command::kCompare: {
      const PipelineState state = run_through_plan(spec);
      const double speedup =
          compare_plans(spec.cluster, spec.model, state.stage,
                        state.planner_plan, state.uniform_plan,
                        spec.iterations);
      const SimReport planner_sim = simulate_run(
          spec.cluster, spec.model, state.planner_plan, state.stage,
          spec.iterations);
      const SimReport uniform_sim = simulate_run(
          spec.cluster, spec.model, state.uniform_plan, state.stage,
          spec.iterations);
      report = json{{"command", "compare"},
                    {"seed", spec.seed},
                    {"stage", stage_index(state.stage)},
                    {"gbs", spec.gbs},
                    {"planner_throughput", planner_sim.mean.throughput},
                    {"uniform_throughput", uniform_sim.mean.throughput},
                    {"speedup", speedup}};
      break;
    }
    case Command::kCheck: {
      if (check_instances < 1) {
        throw InvalidInputError("check requires at least one instance");
      }
      std::mt19937_64 rng(spec.seed);
      const int half = check_instances / 2;
      const CheckSummary zero01 = check_zero01(rng, check_instances - half);
      const CheckSummary zero23 = check_zero23(rng, half);
      const bool passed = zero01.passed && zero23.passed;
      report = json{
          {"command", "check"},
          {"seed", spec.seed},
          {"instances", check_instances},
          {"zero01", json{{"instances", zero01.instances},
                          {"worst", zero01.worst},
                          {"allowed", zero01.allowed},
                          {"passed", zero01.passed}}},
          {"zero23", json{{"instances", zero23.instances},
                          {"worst", zero23.worst},
                          {"allowed", zero23.allowed},
                          {"passed", zero23.passed}}},
          {"passed", passed}};
      if (!passed) exit_code = ExitCode::kCheckFailure;
      break;
    }
  }

  PipelineOutcome outcome;
  outcome.exit_code = exit_code;
  outcome.report = spec.format == OutputFormat::kTable
                       ? to_table(report)
                       : report.dump(2) + "\n";
  return outcome;
}

}  // namespace zeroplan
