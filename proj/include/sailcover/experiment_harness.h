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

// Mission runners, batch orchestration and the on-disk artifacts of a run.
//
// Layout of one batch under the output root:
//   <digest>/<method>/<seed>/record.json
//   <digest>/<method>/<seed>/trace.csv
//   <digest>/<method>/<seed>/curve.csv
//   <digest>/<method>/<seed>/cov_stage<k>.pgm
//   <digest>/summary.txt, <digest>/summary.csv
//   <digest>/plots/manifest.csv and curve_<method>_<seed>.csv

#ifndef SAILCOVER_EXPERIMENT_HARNESS_H_
#define SAILCOVER_EXPERIMENT_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sailcover/experiment_config.h"

namespace sailcover {

struct StageRecord {
  int stage = 0;
  double t = 0.0;             // s, when the stage's last event ended
  double coverage_pct = 0.0;

  friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct TraceRow {
  int stage = 0;
  int decision_idx = 0;
  int action_id = 0;  // 0 marks a wait
  Cell from;
  Cell to;
  double time_s = 0.0;  // duration of the move or wait
  double cum_coverage_pct = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct CurvePoint {
  double t_s = 0.0;
  double coverage_pct = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct RunRecord {
  uint64_t seed = 0;
  std::string method;
  std::string config_digest;
  double target_coverage_pct = 0.0;
  double coverage_pct = 0.0;
  double finish_time_s = 0.0;
  double await_time_s = 0.0;
  double redundancy_pct = 0.0;
  double distance_m = 0.0;
  bool aborted = false;
  bool timed_out = false;
  std::string diagnostic;
  std::vector<StageRecord> stages;
  std::vector<TraceRow> trace;
  std::vector<CurvePoint> curve;
  // Coverage count raster after each stage, as PGM text.
  std::vector<std::pair<int, std::string>> stage_rasters;

  // True when the mission ended normally and reached its target.
  bool Succeeded() const;

  nlohmann::json ToJson() const;  // excludes the rasters
  static RunRecord FromJson(const nlohmann::json& j);

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// One mission of 'method' on scenario 'seed'. The MCTS target is
// 'target_fraction' when given, else the configured eta; the baseline always
// runs its whole sweep.
RunRecord RunMission(const ExperimentConfig& config, const Method& method,
                     uint64_t seed,
                     std::optional<double> target_fraction = std::nullopt);

// Writes record.json, trace.csv, curve.csv and the stage rasters into 'dir'.
void WriteRunArtifacts(const RunRecord& record,
                       const std::filesystem::path& dir);

void WriteTraceCsv(std::ostream& out, const std::vector<TraceRow>& trace);
void WriteCurveCsv(std::ostream& out, const std::vector<CurvePoint>& curve);

struct MethodSummary {
  std::string method;
  int runs = 0;
  int failures = 0;  // aborted or timed out
  double mean_finish = 0.0, std_finish = 0.0;
  double mean_await = 0.0, std_await = 0.0;
  double mean_redundancy = 0.0, std_redundancy = 0.0;
  double mean_distance = 0.0, std_distance = 0.0;
  double mean_coverage = 0.0;
  double median_finish = 0.0;
};

// Aggregates over the records of 'method'. Finish time and the other metrics
// use every completed run; failed runs only count in 'failures'.
MethodSummary Summarize(const std::vector<RunRecord>& records,
                        const std::string& method);

struct BatchResult {
  std::string digest;
  std::vector<RunRecord> records;  // ordered by seed, then method order
  std::vector<MethodSummary> summaries;
};

// Runs every configured method on every seed. The baseline goes first on
// each seed and the planners then aim for max(eta, baseline coverage) so
// that finish times compare like with like. 'jobs' missions run at once.
BatchResult RunBatch(const ExperimentConfig& config, int jobs = 1);

// Table of per-seed results with mean and sample standard deviation rows.
std::string FormatSummaryTable(const BatchResult& batch);
std::string FormatSummaryCsv(const BatchResult& batch);

// Per-run artifacts plus the summary files under <root>/<digest>/.
void WriteBatchArtifacts(const BatchResult& batch,
                         const std::filesystem::path& root);

// Coverage curves and a manifest for external plotting. All records must
// share one config digest.
void EmitPlotData(const std::vector<RunRecord>& records,
                  const std::filesystem::path& dir);

}  // namespace sailcover

#endif  // SAILCOVER_EXPERIMENT_HARNESS_H_
