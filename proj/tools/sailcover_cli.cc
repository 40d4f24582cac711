/*
 * Copyright 2026 The Sailcover Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command line front end.
//
//   sailcover run --config cfg.ini --method mcts_k1 --seed 42 --out out
//   sailcover batch --config cfg.ini --seeds 40..47 --jobs 1 --emit-plots
//   sailcover fields --config cfg.ini --seed 42 --stages 3
//   sailcover polar-check [--polar table.csv]
//   sailcover validate-config --config cfg.ini
//
// Exit status: 0 on success, 2 for configuration errors, 3 when a mission
// aborted or timed out, 1 for anything else.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "sailcover/env_model.h"
#include "sailcover/experiment_config.h"
#include "sailcover/experiment_harness.h"
#include "sailcover/sailing_kinematics.h"

namespace {

using namespace sailcover;

constexpr int kExitConfig = 2;
constexpr int kExitAborted = 3;

ExperimentConfig LoadConfig(const std::string& path,
                            const std::string& polar_override) {
  ExperimentConfig config =
      path.empty() ? ExperimentConfig{} : ExperimentConfig::FromFile(path);
  if (!polar_override.empty()) config.polar_path = polar_override;
  config.Validate();
  config.LoadPolar();  // surface a bad table as a config error now
  return config;
}

int CmdRun(const ExperimentConfig& config, const std::string& method_name,
           uint64_t seed, const std::string& out, bool emit_plots) {
  const Method method = Method::Parse(method_name, config.planner.horizon);
  const RunRecord record = RunMission(config, method, seed);
  const auto dir = std::filesystem::path(out) / record.config_digest /
                   record.method / std::to_string(seed);
  WriteRunArtifacts(record, dir);
  if (emit_plots) {
    EmitPlotData({record}, std::filesystem::path(out) /
                               record.config_digest / "plots");
  }
  std::printf("%s seed %llu: coverage %.2f%% finish %.0f s await %.0f s "
              "redundancy %.2f%% distance %.0f m\n",
              record.method.c_str(), static_cast<unsigned long long>(seed),
              record.coverage_pct, record.finish_time_s, record.await_time_s,
              record.redundancy_pct, record.distance_m);
  std::printf("artifacts in %s\n", dir.string().c_str());
  if (record.aborted || record.timed_out) {
    std::fprintf(stderr, "mission %s: %s\n",
                 record.aborted ? "aborted" : "timed out",
                 record.diagnostic.c_str());
    return kExitAborted;
  }
  return 0;
}

int CmdBatch(const ExperimentConfig& config, const std::string& out, int jobs,
             bool emit_plots) {
  const BatchResult batch = RunBatch(config, jobs);
  WriteBatchArtifacts(batch, out);
  if (emit_plots) {
    EmitPlotData(batch.records,
                 std::filesystem::path(out) / batch.digest / "plots");
  }
  std::cout << FormatSummaryTable(batch);
  for (const auto& r : batch.records) {
    if (r.aborted || r.timed_out) return kExitAborted;
  }
  return 0;
}

int CmdFields(const ExperimentConfig& config, uint64_t seed, int stages,
              const std::string& out) {
  const FieldModel model = config.MakeFieldModel(seed);
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw std::runtime_error("cannot write " + out);
  }
  std::ostream& sink = out.empty() ? std::cout : file;
  WriteFieldCsvHeader(sink);
  for (int k = 0; k < stages; ++k) {
    WriteFieldCsv(sink, k, model.StageField(k, config.grid));
  }
  return 0;
}

int CmdPolarCheck(const ExperimentConfig& config) {
  const PolarTable polar = config.LoadPolar();
  std::printf("twa\\tws");
  for (double tws = 2.0; tws <= 10.0; tws += 2.0) std::printf(" %7.1f", tws);
  std::printf("\n");
  for (double twa = 0.0; twa <= 180.0; twa += 15.0) {
    std::printf("%7.0f", twa);
    for (double tws = 2.0; tws <= 10.0; tws += 2.0) {
      const FlowVector wind{tws, 0.0};
      std::printf(" %7.3f", ActualSpeed(wind, twa, polar));
    }
    std::printf("\n");
  }
  std::printf("no-go angle %.1f deg, %zu TWA x %zu TWS breakpoints\n",
              polar.no_go_angle(), polar.twa().size(), polar.tws().size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage path planning for a sailing vessel"};
  app.require_subcommand(1);

  std::string config_path, polar_path, method = "mcts_k1", out, seeds_text;
  std::string fields_out;
  uint64_t seed = 42;
  int jobs = 1;
  int stages = 1;
  bool emit_plots = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "INI configuration file");
    cmd->add_option("--polar", polar_path, "polar table CSV override");
  };

  auto* run = app.add_subcommand("run", "run one mission");
  add_common(run);
  run->add_option("--method", method, "base, mcts_k0, mcts_k1, ...");
  run->add_option("--seed", seed, "scenario seed");
  run->add_option("--out", out, "output root (default: config run.out)");
  run->add_flag("--emit-plots", emit_plots, "write plot curves and manifest");

  auto* batch = app.add_subcommand("batch", "run every method on every seed");
  add_common(batch);
  batch->add_option("--seeds", seeds_text, "seed range a..b or list a,b,c");
  batch->add_option("--out", out, "output root (default: config run.out)");
  batch->add_option("--jobs", jobs, "missions run concurrently")
      ->check(CLI::PositiveNumber);
  batch->add_flag("--emit-plots", emit_plots,
                  "write plot curves and manifest");

  auto* fields = app.add_subcommand("fields", "dump true stage fields as CSV");
  add_common(fields);
  fields->add_option("--seed", seed, "scenario seed");
  fields->add_option("--stages", stages, "number of stages")
      ->check(CLI::PositiveNumber);
  fields->add_option("--out", fields_out, "CSV path (default: stdout)");

  auto* polar = app.add_subcommand("polar-check", "print the speed polar");
  add_common(polar);

  auto* validate =
      app.add_subcommand("validate-config", "parse and check a config file");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ExperimentConfig config = LoadConfig(config_path, polar_path);
    if (out.empty()) out = config.out_dir;
    if (*run) return CmdRun(config, method, seed, out, emit_plots);
    if (*batch) {
      if (!seeds_text.empty()) config.seeds = ParseSeedList(seeds_text);
      return CmdBatch(config, out, jobs, emit_plots);
    }
    if (*fields) return CmdFields(config, seed, stages, fields_out);
    if (*polar) return CmdPolarCheck(config);
    if (*validate) {
      std::printf("config ok, digest %s\n", config.Digest().c_str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
