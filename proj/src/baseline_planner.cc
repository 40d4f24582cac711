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

#include "sailcover/baseline_planner.h"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sailcover {

BoustrophedonPlan BoustrophedonPlan::Make(const GridSpec& grid) {
  BoustrophedonPlan plan;
  plan.waypoints.reserve(grid.cell_count());
  for (int i = 0; i < grid.rows; ++i) {
    for (int k = 0; k < grid.cols; ++k) {
      const int j = (i % 2 == 0) ? k : grid.cols - 1 - k;
      plan.waypoints.push_back({i, j});
    }
  }
  return plan;
}

int OrthogonalActionIndex(int di, int dj) {
  if (std::abs(di) + std::abs(dj) != 1) {
    throw std::invalid_argument("offset is not a single-cell move");
  }
  const auto actions = MakeActionSet(1.0);
  for (int k = 0; k < kActionCount; ++k) {
    if (actions[k].di == di && actions[k].dj == dj) return k;
  }
  throw std::invalid_argument("offset is not a single-cell move");
}

BaselineStep StepBaseline(EnvState& env, CoverageRaster& raster,
                          BoustrophedonPlan& plan, const FlowField& field,
                          const ActionCatalog& catalog,
                          const PolarTable& polar, double delta_t,
                          double v_floor) {
  BaselineStep step;
  if (plan.Exhausted()) return step;
  const Cell from = plan.current();
  const Cell to = plan.next();
  const int action = OrthogonalActionIndex(to.i - from.i, to.j - from.j);
  const TraversalResult move =
      EvaluateAction(catalog, from, field, action, polar, delta_t, v_floor);
  if (move.feasible) {
    env.ExecuteMove(to, move.total_time);
    raster.StampVisit(to);
    ++plan.cursor;
    step.event = BaselineStep::Event::kMoved;
    step.elapsed = move.total_time;
    step.action_id = action + 1;
    step.distance = move.distance;
    return step;
  }
  const double boundary = (env.stage_index() + 1) * delta_t;
  step.event = BaselineStep::Event::kWaited;
  step.elapsed = boundary - env.t();
  env.WaitUntil(boundary);
  return step;
}

}  // namespace sailcover
