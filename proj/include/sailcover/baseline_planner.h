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

#ifndef SAILCOVER_BASELINE_PLANNER_H_
#define SAILCOVER_BASELINE_PLANNER_H_

#include <vector>

#include "sailcover/coverage_state.h"
#include "sailcover/env_model.h"
#include "sailcover/sailing_kinematics.h"

namespace sailcover {

// Fixed serpentine sweep: row 0 west to east, row 1 east to west, and so on.
struct BoustrophedonPlan {
  std::vector<Cell> waypoints;
  size_t cursor = 0;  // index of the waypoint the vessel is at

  static BoustrophedonPlan Make(const GridSpec& grid);
  bool Exhausted() const { return cursor + 1 >= waypoints.size(); }
  Cell current() const { return waypoints[cursor]; }
  Cell next() const { return waypoints[cursor + 1]; }
};

struct BaselineStep {
  enum class Event { kMoved, kWaited, kComplete };
  Event event = Event::kComplete;
  double elapsed = 0.0;  // s
  int action_id = 0;     // 0 for waits
  double distance = 0.0;
};

// Tries the scheduled move under 'field'. A feasible move advances the
// clock and stamps the destination; otherwise the vessel waits for the next
// stage boundary.
BaselineStep StepBaseline(EnvState& env, CoverageRaster& raster,
                          BoustrophedonPlan& plan, const FlowField& field,
                          const ActionCatalog& catalog,
                          const PolarTable& polar, double delta_t,
                          double v_floor = kDefaultSpeedFloor);

// Index into MakeActionSet of the orthogonal move (di, dj).
int OrthogonalActionIndex(int di, int dj);

}  // namespace sailcover

#endif  // SAILCOVER_BASELINE_PLANNER_H_
