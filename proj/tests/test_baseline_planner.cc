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

#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "sailcover/baseline_planner.h"
#include "sailcover/env_model.h"

namespace sailcover {
namespace {

FieldModel Uniform(FlowVector wind, FlowVector current) {
  FieldModel m;
  m.kind = FieldModel::Kind::kUniform;
  m.uniform_wind = wind;
  m.uniform_current = current;
  return m;
}

TEST_CASE("serpentine waypoints") {
  const GridSpec grid;
  const BoustrophedonPlan plan = BoustrophedonPlan::Make(grid);
  REQUIRE(plan.waypoints.size() == 100);
  CHECK(plan.waypoints.front() == Cell{0, 0});
  CHECK(plan.waypoints[9] == Cell{0, 9});
  CHECK(plan.waypoints[10] == Cell{1, 9});
  CHECK(plan.waypoints.back() == Cell{9, 0});
  for (size_t k = 1; k < plan.waypoints.size(); ++k) {
    const Cell a = plan.waypoints[k - 1];
    const Cell b = plan.waypoints[k];
    CHECK(std::abs(a.i - b.i) + std::abs(a.j - b.j) == 1);
  }
}

TEST_CASE("orthogonal action lookup") {
  const auto actions = MakeActionSet(100.0);
  for (auto [di, dj] : {std::pair{-1, 0}, {1, 0}, {0, 1}, {0, -1}}) {
    const ActionSpec& a = actions[OrthogonalActionIndex(di, dj)];
    CHECK(a.di == di);
    CHECK(a.dj == dj);
  }
  CHECK_THROWS(OrthogonalActionIndex(1, 1));
}

TEST_CASE("flow-free sweep covers the map without waiting") {
  const GridSpec grid;
  const FieldModel model = Uniform({4.0, 45.0}, {0.0, 0.0});
  const ActionCatalog catalog(grid);
  const PolarTable polar = PolarTable::Default();
  EnvState env(grid, model, 300.0, {0, 0});
  CoverageRaster raster(grid);
  raster.StampVisit({0, 0});
  BoustrophedonPlan plan = BoustrophedonPlan::Make(grid);
  double distance = 0.0, waited = 0.0;
  int moves = 0;
  while (true) {
    const BaselineStep s =
        StepBaseline(env, raster, plan, env.field(), catalog, polar, 300.0);
    if (s.event == BaselineStep::Event::kComplete) break;
    if (s.event == BaselineStep::Event::kWaited) waited += s.elapsed;
    if (s.event == BaselineStep::Event::kMoved) ++moves;
    distance += s.distance;
  }
  CHECK(moves == 99);
  CHECK(distance == doctest::Approx(9900.0));
  CHECK(waited == 0.0);
  CHECK(env.vessel_cell() == Cell{9, 0});
  CHECK(raster.CoverageFraction() >= 0.999);
}

TEST_CASE("an infeasible waypoint waits for the next stage") {
  // No wind and an eastward current: eastbound legs drift, the southward
  // turn has zero speed.
  const GridSpec grid;
  const FieldModel model = Uniform({0.0, 0.0}, {1.0, 90.0});
  const ActionCatalog catalog(grid);
  const PolarTable polar = PolarTable::Default();
  EnvState env(grid, model, 300.0, {0, 0});
  CoverageRaster raster(grid);
  BoustrophedonPlan plan = BoustrophedonPlan::Make(grid);
  for (int k = 0; k < 9; ++k) {
    const BaselineStep s =
        StepBaseline(env, raster, plan, env.field(), catalog, polar, 300.0);
    REQUIRE(s.event == BaselineStep::Event::kMoved);
    CHECK(s.elapsed == doctest::Approx(100.0));
  }
  CHECK(env.t() == doctest::Approx(900.0));
  const BaselineStep wait =
      StepBaseline(env, raster, plan, env.field(), catalog, polar, 300.0);
  CHECK(wait.event == BaselineStep::Event::kWaited);
  CHECK(wait.action_id == 0);
  CHECK(wait.elapsed == doctest::Approx(300.0));
  CHECK(env.t() == doctest::Approx(1200.0));
  CHECK(env.stage_index() == 4);
  CHECK(env.vessel_cell() == Cell{0, 9});
  CHECK(plan.cursor == 9);
}

TEST_CASE("a finished plan reports completion") {
  GridSpec grid;
  grid.rows = grid.cols = 1;
  EnvState env(grid, Uniform({3.0, 0.0}, {0.0, 0.0}), 300.0, {0, 0});
  CoverageRaster raster(grid);
  BoustrophedonPlan plan = BoustrophedonPlan::Make(grid);
  CHECK(plan.Exhausted());
  const BaselineStep s = StepBaseline(env, raster, plan, env.field(),
                                      ActionCatalog(grid),
                                      PolarTable::Default(), 300.0);
  CHECK(s.event == BaselineStep::Event::kComplete);
  CHECK(env.t() == 0.0);
}

}  // namespace
}  // namespace sailcover
