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

#ifndef SAILCOVER_SAILING_KINEMATICS_H_
#define SAILCOVER_SAILING_KINEMATICS_H_

#include <array>
#include <string>
#include <vector>

#include "sailcover/env_model.h"
#include "sailcover/geometry.h"

namespace sailcover {

// Boat speed by true wind angle (rows) and true wind speed (columns).
// Lookups interpolate bilinearly and clamp at the table edges, except that
// speed falls linearly to zero between the lowest wind-speed breakpoint and
// calm.
class PolarTable {
 public:
  PolarTable(std::vector<double> twa_deg, std::vector<double> tws,
             std::vector<std::vector<double>> speed, double no_go_angle = 40.0);

  // Dimensionless polar shape scaled by wind speed; see README.
  static PolarTable Default();

  // CSV layout: the first row holds TWS breakpoints (its first field is a
  // label and ignored), each further row is a TWA breakpoint followed by
  // boat speeds.
  static PolarTable FromCsvText(const std::string& text,
                                double no_go_angle = 40.0);
  static PolarTable FromCsvFile(const std::string& path,
                                double no_go_angle = 40.0);

  double BoatSpeed(double tws, double twa_deg) const;
  double no_go_angle() const { return no_go_angle_; }
  const std::vector<double>& twa() const { return twa_; }
  const std::vector<double>& tws() const { return tws_; }
  const std::vector<std::vector<double>>& speeds() const { return speed_; }

 private:
  std::vector<double> twa_;
  std::vector<double> tws_;
  std::vector<std::vector<double>> speed_;  // [twa][tws]
  double no_go_angle_;
};

constexpr double kNoGoPenalty = 0.95;
constexpr double kDefaultSpeedFloor = 0.05;  // m/s
constexpr int kActionCount = 16;

struct ActionSpec {
  int id = 0;  // 1..16, clockwise from north
  int di = 0;
  int dj = 0;
  double track_length = 0.0;     // m
  double track_direction = 0.0;  // compass bearing, degrees
};

// The 16 moves (4 orthogonal, 4 diagonal, 8 knight) for a cell size.
std::array<ActionSpec, kActionCount> MakeActionSet(double cell_size);

// Boat speed through the water for a track: polar speed beyond the no-go
// angle, a 5% penalty on the no-go boundary speed inside it.
double ActualSpeed(const FlowVector& wind, double track_direction,
                   const PolarTable& polar);

// Boat speed plus the along-track projection of the current. May be <= 0.
double EffectiveSpeed(double v_act, double track_direction,
                      const FlowVector& current);

struct TrackSegment {
  Cell cell;
  double length = 0.0;           // m
  double effective_speed = 0.0;  // m/s, filled by EvaluateAction
};

// Exact intersection of the center-to-center segment with the cell lattice.
// Pieces are in travel order; a pass exactly through a lattice corner goes
// straight into the diagonal cell with no zero-length piece.
std::vector<TrackSegment> DecomposeTrack(const GridSpec& grid, Cell from,
                                         const ActionSpec& action);

struct TraversalResult {
  bool feasible = false;
  double total_time = 0.0;  // s
  double distance = 0.0;    // m
  Cell destination;
  std::vector<TrackSegment> segments;
};

// Precomputed relative decompositions of all 16 actions for one grid.
class ActionCatalog {
 public:
  explicit ActionCatalog(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  const std::array<ActionSpec, kActionCount>& actions() const {
    return actions_;
  }
  const ActionSpec& action(int index) const { return actions_[index]; }
  // Segment cells relative to the origin cell.
  const std::vector<TrackSegment>& relative_segments(int index) const {
    return segments_[index];
  }

 private:
  GridSpec grid_;
  std::array<ActionSpec, kActionCount> actions_;
  std::array<std::vector<TrackSegment>, kActionCount> segments_;
};

// Feasible when the destination is on the map, no segment falls to or below
// 'v_floor', and the total time fits 'time_budget'.
TraversalResult EvaluateAction(const ActionCatalog& catalog, Cell from,
                               const FlowField& field, int action_index,
                               const PolarTable& polar, double time_budget,
                               double v_floor = kDefaultSpeedFloor);

TraversalResult EvaluateAction(const EnvState& env, const FlowField& field,
                               const ActionSpec& action,
                               const PolarTable& polar, double time_budget,
                               double v_floor = kDefaultSpeedFloor);

// Time-only variant of EvaluateAction for hot loops. Returns a negative
// value when the action is infeasible.
double TraversalTime(const ActionCatalog& catalog, Cell from,
                     const FlowField& field, int action_index,
                     const PolarTable& polar, double time_budget,
                     double v_floor = kDefaultSpeedFloor);

}  // namespace sailcover

#endif  // SAILCOVER_SAILING_KINEMATICS_H_
