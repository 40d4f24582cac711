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

#include "sailcover/sailing_kinematics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sailcover {

namespace {

// Index of the lower breakpoint bracketing 'x' and the fraction towards the
// upper one. 'x' must already be clamped into the breakpoint range.
std::pair<int, double> Bracket(const std::vector<double>& knots, double x) {
  if (knots.size() == 1) return {0, 0.0};
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  int hi = static_cast<int>(it - knots.begin());
  hi = std::clamp(hi, 1, static_cast<int>(knots.size()) - 1);
  const int lo = hi - 1;
  const double frac = (x - knots[lo]) / (knots[hi] - knots[lo]);
  return {lo, std::clamp(frac, 0.0, 1.0)};
}

void CheckAscending(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  for (size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] > v[k - 1])) {
      throw std::invalid_argument(std::string(what) + " must be ascending");
    }
  }
}

std::vector<double> ParseCsvRow(const std::string& line) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      values.push_back(std::nan(""));
      continue;
    }
    try {
      values.push_back(std::stod(field.substr(first)));
    } catch (const std::exception&) {
      values.push_back(std::nan(""));
    }
  }
  return values;
}

}  // namespace

PolarTable::PolarTable(std::vector<double> twa_deg, std::vector<double> tws,
                       std::vector<std::vector<double>> speed,
                       double no_go_angle)
    : twa_(std::move(twa_deg)),
      tws_(std::move(tws)),
      speed_(std::move(speed)),
      no_go_angle_(no_go_angle) {
  CheckAscending(twa_, "TWA breakpoints");
  CheckAscending(tws_, "TWS breakpoints");
  if (twa_.front() <= 0.0 || twa_.back() > 180.0) {
    throw std::invalid_argument("TWA breakpoints must lie in (0, 180]");
  }
  if (tws_.front() <= 0.0) {
    throw std::invalid_argument("TWS breakpoints must be positive");
  }
  if (speed_.size() != twa_.size()) {
    throw std::invalid_argument("polar table has wrong number of rows");
  }
  for (const auto& row : speed_) {
    if (row.size() != tws_.size()) {
      throw std::invalid_argument("polar table has wrong number of columns");
    }
    for (double v : row) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument("polar speeds must be non-negative");
      }
    }
  }
  if (!(no_go_angle_ > 0.0 && no_go_angle_ < 180.0)) {
    throw std::invalid_argument("no-go angle must lie in (0, 180)");
  }
}

PolarTable PolarTable::Default() {
  const std::vector<double> twa = {40,  52,  60,  75,  90, 110,
                                   120, 135, 150, 165, 180};
  const std::vector<double> shape = {0.42, 0.52, 0.58, 0.66, 0.71, 0.74,
                                     0.72, 0.66, 0.58, 0.52, 0.48};
  const std::vector<double> tws = {2, 4, 6, 8, 10};
  std::vector<std::vector<double>> speed(twa.size());
  for (size_t a = 0; a < twa.size(); ++a) {
    for (double w : tws) speed[a].push_back(w * shape[a]);
  }
  return PolarTable(twa, tws, speed, 40.0);
}

PolarTable PolarTable::FromCsvText(const std::string& text,
                                   double no_go_angle) {
  std::stringstream in(text);
  std::string line;
  std::vector<double> tws;
  std::vector<double> twa;
  std::vector<std::vector<double>> speed;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row = ParseCsvRow(line);
    if (row.size() < 2) throw std::invalid_argument("polar row too short");
    if (header) {
      tws.assign(row.begin() + 1, row.end());
      header = false;
      continue;
    }
    twa.push_back(row.front());
    speed.emplace_back(row.begin() + 1, row.end());
  }
  for (double v : tws) {
    if (std::isnan(v)) throw std::invalid_argument("bad TWS breakpoint");
  }
  for (const auto& r : speed) {
    for (double v : r) {
      if (std::isnan(v)) throw std::invalid_argument("bad polar speed");
    }
  }
  return PolarTable(twa, tws, speed, no_go_angle);
}

PolarTable PolarTable::FromCsvFile(const std::string& path,
                                   double no_go_angle) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open polar file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromCsvText(buffer.str(), no_go_angle);
}

double PolarTable::BoatSpeed(double tws, double twa_deg) const {
  if (!(tws > 0.0)) return 0.0;
  const double angle = std::clamp(twa_deg, twa_.front(), twa_.back());
  const auto [a, fa] = Bracket(twa_, angle);
  const int a1 = std::min(a + 1, static_cast<int>(twa_.size()) - 1);
  const auto at_speed_column = [&](int w) {
    return (1.0 - fa) * speed_[a][w] + fa * speed_[a1][w];
  };
  if (tws < tws_.front()) return at_speed_column(0) * (tws / tws_.front());
  const double wind = std::min(tws, tws_.back());
  const auto [w, fw] = Bracket(tws_, wind);
  const int w1 = std::min(w + 1, static_cast<int>(tws_.size()) - 1);
  return (1.0 - fw) * at_speed_column(w) + fw * at_speed_column(w1);
}

std::array<ActionSpec, kActionCount> MakeActionSet(double cell_size) {
  // Clockwise from north.
  static constexpr int kOffsets[kActionCount][2] = {
      {-1, 0}, {-2, 1}, {-1, 1}, {-1, 2}, {0, 1},  {1, 2},  {1, 1},  {2, 1},
      {1, 0},  {2, -1}, {1, -1}, {1, -2}, {0, -1}, {-1, -2}, {-1, -1}, {-2, -1}};
  std::array<ActionSpec, kActionCount> actions;
  for (int k = 0; k < kActionCount; ++k) {
    const int di = kOffsets[k][0];
    const int dj = kOffsets[k][1];
    actions[k] = ActionSpec{k + 1, di, dj,
                            cell_size * std::sqrt(double(di * di + dj * dj)),
                            OffsetBearing(di, dj)};
  }
  return actions;
}

double ActualSpeed(const FlowVector& wind, double track_direction,
                   const PolarTable& polar) {
  if (!(wind.speed > 0.0)) return 0.0;
  const double twa = AngularDistance(wind.direction, track_direction);
  if (twa > polar.no_go_angle()) return polar.BoatSpeed(wind.speed, twa);
  return kNoGoPenalty * polar.BoatSpeed(wind.speed, polar.no_go_angle());
}

double EffectiveSpeed(double v_act, double track_direction,
                      const FlowVector& current) {
  return v_act + current.speed * std::cos((current.direction -
                                           track_direction) * kDegToRad);
}

std::vector<TrackSegment> DecomposeTrack(const GridSpec& grid, Cell from,
                                         const ActionSpec& action) {
  const double x0 = from.j + 0.5;
  const double y0 = from.i + 0.5;
  const double dx = action.dj;
  const double dy = action.di;

  std::vector<double> cuts = {0.0, 1.0};
  const auto add_crossings = [&](double origin, double delta) {
    if (delta == 0.0) return;
    const double lo = std::min(origin, origin + delta);
    const double hi = std::max(origin, origin + delta);
    for (double k = std::ceil(lo); k <= hi; k += 1.0) {
      const double t = (k - origin) / delta;
      if (t > 0.0 && t < 1.0) cuts.push_back(t);
    }
  };
  add_crossings(x0, dx);
  add_crossings(y0, dy);
  std::sort(cuts.begin(), cuts.end());

  std::vector<TrackSegment> segments;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double t0 = cuts[k];
    const double t1 = cuts[k + 1];
    if (t1 - t0 < 1e-12) continue;  // corner contact
    const double mid = 0.5 * (t0 + t1);
    const Cell cell{static_cast<int>(std::floor(y0 + mid * dy)),
                    static_cast<int>(std::floor(x0 + mid * dx))};
    segments.push_back({cell, (t1 - t0) * action.track_length, 0.0});
  }
  (void)grid;
  return segments;
}

ActionCatalog::ActionCatalog(const GridSpec& grid)
    : grid_(grid), actions_(MakeActionSet(grid.cell_size)) {
  for (int k = 0; k < kActionCount; ++k) {
    segments_[k] = DecomposeTrack(grid_, Cell{0, 0}, actions_[k]);
  }
}

namespace {

struct Traverse {
  bool on_map = false;
  bool above_floor = false;
  double total_time = 0.0;
};

// Shared core of EvaluateAction and TraversalTime.
Traverse TraverseSegments(const ActionCatalog& catalog, Cell from,
                          const FlowField& field, int action_index,
                          const PolarTable& polar, double v_floor,
                          std::vector<TrackSegment>* out) {
  const ActionSpec& action = catalog.action(action_index);
  Traverse result;
  const Cell dest{from.i + action.di, from.j + action.dj};
  if (!catalog.grid().Contains(dest)) return result;
  result.on_map = true;
  result.above_floor = true;
  for (const TrackSegment& rel : catalog.relative_segments(action_index)) {
    const Cell cell{from.i + rel.cell.i, from.j + rel.cell.j};
    const double v_act =
        ActualSpeed(field.Wind(cell), action.track_direction, polar);
    const double v_eff =
        EffectiveSpeed(v_act, action.track_direction, field.Current(cell));
    if (out != nullptr) out->push_back({cell, rel.length, v_eff});
    if (v_eff <= v_floor) {
      result.above_floor = false;
      if (out == nullptr) return result;
      continue;
    }
    result.total_time += rel.length / v_eff;
  }
  return result;
}

}  // namespace

TraversalResult EvaluateAction(const ActionCatalog& catalog, Cell from,
                               const FlowField& field, int action_index,
                               const PolarTable& polar, double time_budget,
                               double v_floor) {
  const ActionSpec& action = catalog.action(action_index);
  TraversalResult result;
  result.destination = {from.i + action.di, from.j + action.dj};
  result.distance = action.track_length;
  const Traverse t = TraverseSegments(catalog, from, field, action_index,
                                      polar, v_floor, &result.segments);
  result.feasible =
      t.on_map && t.above_floor && t.total_time <= time_budget;
  // Over-budget moves keep their would-be time for diagnostics.
  result.total_time = t.above_floor ? t.total_time
                                    : std::numeric_limits<double>::infinity();
  return result;
}

TraversalResult EvaluateAction(const EnvState& env, const FlowField& field,
                               const ActionSpec& action,
                               const PolarTable& polar, double time_budget,
                               double v_floor) {
  const ActionCatalog catalog(env.grid());
  return EvaluateAction(catalog, env.vessel_cell(), field, action.id - 1,
                        polar, time_budget, v_floor);
}

double TraversalTime(const ActionCatalog& catalog, Cell from,
                     const FlowField& field, int action_index,
                     const PolarTable& polar, double time_budget,
                     double v_floor) {
  const Traverse t = TraverseSegments(catalog, from, field, action_index,
                                      polar, v_floor, nullptr);
  if (!t.on_map || !t.above_floor || t.total_time > time_budget) return -1.0;
  return t.total_time;
}

}  // namespace sailcover
