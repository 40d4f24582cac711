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

#include "sailcover/experiment_harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sailcover/baseline_planner.h"
#include "sailcover/mcts_planner.h"
#include "sailcover/random.h"

namespace sailcover {
namespace {

constexpr uint64_t kPlannerStream = 0x5EEDull;

std::string RasterPgm(const CoverageRaster& raster) {
  std::ostringstream out;
  WritePgm(out, raster);
  return out.str();
}

// Bookkeeping shared by both mission loops.
class MissionLog {
 public:
  MissionLog(RunRecord& record, const CoverageRaster& raster,
             const EnvState& env)
      : record_(record), raster_(raster), env_(env),
        stage_(env.stage_index()) {
    record_.curve.push_back({env.t(), Pct()});
  }

  double Pct() const { return 100.0 * raster_.CoverageFraction(); }

  // Records one executed move or wait that started in 'stage'.
  void Event(int stage, int decision_idx, int action_id, Cell from, Cell to,
             double duration) {
    record_.trace.push_back(
        {stage, decision_idx, action_id, from, to, duration, Pct()});
    record_.curve.push_back({env_.t(), Pct()});
    CloseStagesBefore(env_.stage_index());
  }

  // Snapshot of every stage that ended before 'stage'.
  void CloseStagesBefore(int stage) {
    if (stage_ < stage) {
      Snapshot(stage_);
      stage_ = stage;
    }
  }

  void Finish() { Snapshot(stage_); }

 private:
  void Snapshot(int stage) {
    record_.stages.push_back({stage, env_.t(), Pct()});
    record_.stage_rasters.emplace_back(stage, RasterPgm(raster_));
  }

  RunRecord& record_;
  const CoverageRaster& raster_;
  const EnvState& env_;
  int stage_;
};

void FinishRecord(RunRecord& record, const EnvState& env,
                  const CoverageRaster& raster, double alpha) {
  record.coverage_pct = 100.0 * raster.CoverageFraction();
  record.finish_time_s = env.t();
  record.redundancy_pct = ComputeRedundancy(raster, alpha).redundancy_pct;
}

RunRecord RunBaselineMission(const ExperimentConfig& config, uint64_t seed) {
  RunRecord record;
  record.seed = seed;
  record.method = "base";
  record.config_digest = config.Digest();
  record.target_coverage_pct = 100.0;

  const PolarTable polar = config.LoadPolar();
  const ActionCatalog catalog(config.grid);
  const double dt = config.planner.delta_t;
  EnvState env(config.grid, config.MakeFieldModel(seed), dt, config.start);
  CoverageRaster raster(config.grid);
  raster.StampVisit(env.vessel_cell());
  MissionLog log(record, raster, env);

  BoustrophedonPlan plan = BoustrophedonPlan::Make(config.grid);
  if (plan.waypoints.front() != config.start) {
    // The sweep always starts at (0, 0); a different start sails there
    // first is not modelled, so insist on the corner.
    throw ConfigError("grid.start_i", "baseline sweep starts at cell (0,0)");
  }
  int waits_in_a_row = 0;
  while (!plan.Exhausted()) {
    if (env.stage_index() >= config.max_stages) {
      record.timed_out = true;
      record.diagnostic = "stage limit reached";
      break;
    }
    const int stage = env.stage_index();
    const Cell from = plan.current();
    const BaselineStep step =
        StepBaseline(env, raster, plan, env.field(), catalog, polar, dt,
                     config.planner.v_floor);
    if (step.event == BaselineStep::Event::kWaited) {
      record.await_time_s += step.elapsed;
      log.Event(stage, static_cast<int>(record.trace.size()), 0, from, from,
                step.elapsed);
      if (++waits_in_a_row >= config.baseline_wait_limit) {
        record.timed_out = true;
        record.diagnostic = "next waypoint infeasible for " +
                            std::to_string(waits_in_a_row) + " stages";
        break;
      }
    } else {
      waits_in_a_row = 0;
      record.distance_m += step.distance;
      log.Event(stage, static_cast<int>(record.trace.size()), step.action_id,
                from, plan.current(), step.elapsed);
    }
  }
  log.Finish();
  FinishRecord(record, env, raster, config.planner.score.alpha);
  return record;
}

RunRecord RunMctsMission(const ExperimentConfig& config, const Method& method,
                         uint64_t seed, double target) {
  RunRecord record;
  record.seed = seed;
  record.method = method.Name();
  record.config_digest = config.Digest();
  record.target_coverage_pct = 100.0 * target;

  PlannerConfig pc = config.planner;
  pc.horizon = method.horizon;
  pc.eta = target;
  pc.seed = DeriveSeed({seed, kPlannerStream});
  const PolarTable polar = config.LoadPolar();
  const FieldModel model = config.MakeFieldModel(seed);
  MctsPlanner planner(config.grid, polar, pc);

  EnvState env(config.grid, model, pc.delta_t, config.start);
  CoverageRaster raster(config.grid);
  raster.StampVisit(env.vessel_cell());
  MissionLog log(record, raster, env);

  while (raster.CoverageFraction() < target) {
    if (env.stage_index() >= config.max_stages) {
      record.timed_out = true;
      record.diagnostic = "stage limit reached";
      break;
    }
    const int stage = env.stage_index();
    const ForecastSequence forecast = MakeForecast(
        model, stage, pc.horizon, config.grid, pc.delta_t, config.forecast);
    const PhaseResult phase = planner.PlanPhase(env, raster, forecast);
    for (const Decision& d : phase.decisions) {
      record.distance_m += planner.catalog().action(d.action_id - 1)
                               .track_length;
      // Each move is logged after the fact, so the environment clock has
      // already moved on; replay the curve point from the decision itself.
      record.trace.push_back({d.stage, d.index, d.action_id, d.from, d.to,
                              d.duration, 100.0 * d.coverage_after});
      record.curve.push_back({d.start_time + d.duration,
                              100.0 * d.coverage_after});
    }
    log.CloseStagesBefore(env.stage_index());
    if (phase.aborted) {
      record.aborted = true;
      record.diagnostic = phase.diagnostic;
      break;
    }
  }
  log.Finish();
  FinishRecord(record, env, raster, pc.score.alpha);
  return record;
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1); zero for a single value.
double StdDev(const std::vector<double>& v) {
  if (v.size() < 2) return v.empty() ? std::nan("") : 0.0;
  const double m = Mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double Median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Runs fn(i) for i in [0, n) on up to 'jobs' threads.
template <typename Fn>
void ParallelFor(size_t n, int jobs, Fn fn) {
  const size_t workers =
      std::min(n, static_cast<size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

bool RunRecord::Succeeded() const {
  return !aborted && !timed_out && coverage_pct + 1e-9 >= target_coverage_pct;
}

nlohmann::json RunRecord::ToJson() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["method"] = method;
  j["config_digest"] = config_digest;
  j["target_coverage_pct"] = target_coverage_pct;
  j["coverage_pct"] = coverage_pct;
  j["finish_time_s"] = finish_time_s;
  j["await_time_s"] = await_time_s;
  j["redundancy_pct"] = redundancy_pct;
  j["distance_m"] = distance_m;
  j["aborted"] = aborted;
  j["timed_out"] = timed_out;
  j["diagnostic"] = diagnostic;
  auto& stages_j = j["stages"] = nlohmann::json::array();
  for (const auto& s : stages) {
    stages_j.push_back({{"stage", s.stage}, {"t", s.t},
                        {"coverage_pct", s.coverage_pct}});
  }
  auto& trace_j = j["trace"] = nlohmann::json::array();
  for (const auto& r : trace) {
    trace_j.push_back({r.stage, r.decision_idx, r.action_id, r.from.i,
                       r.from.j, r.to.i, r.to.j, r.time_s,
                       r.cum_coverage_pct});
  }
  auto& curve_j = j["curve"] = nlohmann::json::array();
  for (const auto& p : curve) curve_j.push_back({p.t_s, p.coverage_pct});
  return j;
}

RunRecord RunRecord::FromJson(const nlohmann::json& j) {
  RunRecord r;
  r.seed = j.at("seed").get<uint64_t>();
  r.method = j.at("method").get<std::string>();
  r.config_digest = j.at("config_digest").get<std::string>();
  r.target_coverage_pct = j.at("target_coverage_pct").get<double>();
  r.coverage_pct = j.at("coverage_pct").get<double>();
  r.finish_time_s = j.at("finish_time_s").get<double>();
  r.await_time_s = j.at("await_time_s").get<double>();
  r.redundancy_pct = j.at("redundancy_pct").get<double>();
  r.distance_m = j.at("distance_m").get<double>();
  r.aborted = j.at("aborted").get<bool>();
  r.timed_out = j.at("timed_out").get<bool>();
  r.diagnostic = j.at("diagnostic").get<std::string>();
  for (const auto& s : j.at("stages")) {
    r.stages.push_back({s.at("stage").get<int>(), s.at("t").get<double>(),
                        s.at("coverage_pct").get<double>()});
  }
  for (const auto& t : j.at("trace")) {
    r.trace.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(),
                       Cell{t[3].get<int>(), t[4].get<int>()},
                       Cell{t[5].get<int>(), t[6].get<int>()},
                       t[7].get<double>(), t[8].get<double>()});
  }
  for (const auto& p : j.at("curve")) {
    r.curve.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return r;
}

RunRecord RunMission(const ExperimentConfig& config, const Method& method,
                     uint64_t seed, std::optional<double> target_fraction) {
  if (method.baseline) return RunBaselineMission(config, seed);
  const double target = target_fraction.value_or(config.planner.eta);
  if (!(target > 0.0 && target <= 1.0)) {
    throw std::invalid_argument("coverage target must lie in (0, 1]");
  }
  return RunMctsMission(config, method, seed, target);
}

void WriteTraceCsv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "stage,decision_idx,action_id,from_i,from_j,to_i,to_j,time_s,"
         "cum_coverage\n";
  for (const auto& r : trace) {
    out << r.stage << ',' << r.decision_idx << ',' << r.action_id << ','
        << r.from.i << ',' << r.from.j << ',' << r.to.i << ',' << r.to.j
        << ',' << Fixed(r.time_s, 3) << ',' << Fixed(r.cum_coverage_pct, 4)
        << '\n';
  }
}

void WriteCurveCsv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "t_s,coverage_pct\n";
  for (const auto& p : curve) {
    out << Fixed(p.t_s, 3) << ',' << Fixed(p.coverage_pct, 4) << '\n';
  }
}

void WriteRunArtifacts(const RunRecord& record,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteFile(dir / "record.json", record.ToJson().dump(2) + "\n");
  std::ostringstream trace, curve;
  WriteTraceCsv(trace, record.trace);
  WriteCurveCsv(curve, record.curve);
  WriteFile(dir / "trace.csv", trace.str());
  WriteFile(dir / "curve.csv", curve.str());
  for (const auto& [stage, pgm] : record.stage_rasters) {
    WriteFile(dir / ("cov_stage" + std::to_string(stage) + ".pgm"), pgm);
  }
}

MethodSummary Summarize(const std::vector<RunRecord>& records,
                        const std::string& method) {
  MethodSummary s;
  s.method = method;
  std::vector<double> finish, await, redundancy, distance, coverage;
  for (const auto& r : records) {
    if (r.method != method) continue;
    ++s.runs;
    if (r.aborted || r.timed_out) {
      ++s.failures;
      continue;
    }
    finish.push_back(r.finish_time_s);
    await.push_back(r.await_time_s);
    redundancy.push_back(r.redundancy_pct);
    distance.push_back(r.distance_m);
    coverage.push_back(r.coverage_pct);
  }
  s.mean_finish = Mean(finish);
  s.std_finish = StdDev(finish);
  s.mean_await = Mean(await);
  s.std_await = StdDev(await);
  s.mean_redundancy = Mean(redundancy);
  s.std_redundancy = StdDev(redundancy);
  s.mean_distance = Mean(distance);
  s.std_distance = StdDev(distance);
  s.mean_coverage = Mean(coverage);
  s.median_finish = Median(finish);
  return s;
}

BatchResult RunBatch(const ExperimentConfig& config, int jobs) {
  BatchResult batch;
  batch.digest = config.Digest();

  std::vector<Method> methods;
  bool has_base = false;
  for (const auto& name : config.methods) {
    methods.push_back(Method::Parse(name, config.planner.horizon));
    has_base = has_base || methods.back().baseline;
  }
  const size_t n_seeds = config.seeds.size();
  const size_t n_methods = methods.size();
  std::vector<RunRecord> grid(n_seeds * n_methods);

  // Baselines first: they set each seed's coverage target.
  std::vector<double> targets(n_seeds, config.planner.eta);
  if (has_base) {
    const size_t base_col = static_cast<size_t>(
        std::find_if(methods.begin(), methods.end(),
                     [](const Method& m) { return m.baseline; }) -
        methods.begin());
    ParallelFor(n_seeds, jobs, [&](size_t s) {
      grid[s * n_methods + base_col] =
          RunMission(config, methods[base_col], config.seeds[s]);
    });
    for (size_t s = 0; s < n_seeds; ++s) {
      const RunRecord& base = grid[s * n_methods + base_col];
      if (!base.timed_out) {
        targets[s] = std::max(targets[s], base.coverage_pct / 100.0);
      }
    }
  }

  std::vector<std::pair<size_t, size_t>> tasks;
  for (size_t s = 0; s < n_seeds; ++s) {
    for (size_t m = 0; m < n_methods; ++m) {
      if (!methods[m].baseline) tasks.emplace_back(s, m);
    }
  }
  ParallelFor(tasks.size(), jobs, [&](size_t k) {
    const auto [s, m] = tasks[k];
    grid[s * n_methods + m] =
        RunMission(config, methods[m], config.seeds[s], targets[s]);
  });

  batch.records = std::move(grid);
  for (const auto& m : methods) {
    batch.summaries.push_back(Summarize(batch.records, m.Name()));
  }
  return batch;
}

std::string FormatSummaryTable(const BatchResult& batch) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-6s %-9s %9s %22s %12s %12s\n", "Seed",
                "Method", "Cover(%)", "Finish(s) (await)", "Redund.(%)",
                "Dist.(m)");
  out << "config " << batch.digest << "\n" << line;
  for (const auto& r : batch.records) {
    std::string finish = Fixed(r.finish_time_s, 0) + " (" +
                         Fixed(r.await_time_s, 0) + ")";
    if (r.timed_out) finish += " timeout";
    if (r.aborted) finish += " aborted";
    std::snprintf(line, sizeof(line), "%-6llu %-9s %9.2f %22s %12.2f %12.0f\n",
                  static_cast<unsigned long long>(r.seed), r.method.c_str(),
                  r.coverage_pct, finish.c_str(), r.redundancy_pct,
                  r.distance_m);
    out << line;
  }
  out << "\n";
  for (const auto& s : batch.summaries) {
    const std::string finish = Fixed(s.mean_finish, 0) + "+-" +
                               Fixed(s.std_finish, 0) + " (" +
                               Fixed(s.mean_await, 0) + ")";
    std::snprintf(line, sizeof(line),
                  "%-6s %-9s %9.2f %22s %5.2f+-%5.2f %6.0f+-%4.0f  "
                  "failures %d/%d\n",
                  "mean", s.method.c_str(), s.mean_coverage, finish.c_str(),
                  s.mean_redundancy, s.std_redundancy, s.mean_distance,
                  s.std_distance, s.failures, s.runs);
    out << line;
  }
  return out.str();
}

std::string FormatSummaryCsv(const BatchResult& batch) {
  std::ostringstream out;
  out << "method,runs,failures,mean_coverage_pct,mean_finish_s,std_finish_s,"
         "median_finish_s,mean_await_s,std_await_s,mean_redundancy_pct,"
         "std_redundancy_pct,mean_distance_m,std_distance_m\n";
  for (const auto& s : batch.summaries) {
    out << s.method << ',' << s.runs << ',' << s.failures << ','
        << Fixed(s.mean_coverage, 4) << ',' << Fixed(s.mean_finish, 3) << ','
        << Fixed(s.std_finish, 3) << ',' << Fixed(s.median_finish, 3) << ','
        << Fixed(s.mean_await, 3) << ',' << Fixed(s.std_await, 3) << ','
        << Fixed(s.mean_redundancy, 4) << ',' << Fixed(s.std_redundancy, 4)
        << ',' << Fixed(s.mean_distance, 3) << ','
        << Fixed(s.std_distance, 3) << '\n';
  }
  return out.str();
}

void WriteBatchArtifacts(const BatchResult& batch,
                         const std::filesystem::path& root) {
  const auto dir = root / batch.digest;
  std::filesystem::create_directories(dir);
  for (const auto& r : batch.records) {
    WriteRunArtifacts(r, dir / r.method / std::to_string(r.seed));
  }
  WriteFile(dir / "summary.txt", FormatSummaryTable(batch));
  WriteFile(dir / "summary.csv", FormatSummaryCsv(batch));
}

void EmitPlotData(const std::vector<RunRecord>& records,
                  const std::filesystem::path& dir) {
  std::set<std::string> digests;
  for (const auto& r : records) digests.insert(r.config_digest);
  if (digests.size() > 1) {
    throw std::invalid_argument("plot data mixes config digests");
  }
  std::filesystem::create_directories(dir);
  std::ostringstream manifest;
  manifest << "method,seed,config_digest,path\n";
  for (const auto& r : records) {
    const std::string name =
        "curve_" + r.method + "_" + std::to_string(r.seed) + ".csv";
    std::ostringstream curve;
    WriteCurveCsv(curve, r.curve);
    WriteFile(dir / name, curve.str());
    manifest << r.method << ',' << r.seed << ',' << r.config_digest << ','
             << name << '\n';
  }
  WriteFile(dir / "manifest.csv", manifest.str());
}

}  // namespace sailcover
