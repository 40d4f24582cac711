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
#include <limits>

#include "oracles.h"
#include "sailcover/geometry.h"
#include "sailcover/sailing_kinematics.h"

namespace sailcover {
namespace {

FlowField UniformField(const GridSpec& grid, FlowVector wind,
                       FlowVector current) {
  FlowField f(grid.rows, grid.cols);
  std::fill(f.wind.begin(), f.wind.end(), wind);
  std::fill(f.current.begin(), f.current.end(), current);
  return f;
}

int ActionIndex(int di, int dj) {
  const auto actions = MakeActionSet(100.0);
  for (int k = 0; k < kActionCount; ++k) {
    if (actions[k].di == di && actions[k].dj == dj) return k;
  }
  return -1;
}

TEST_CASE("action set runs clockwise from north") {
  const auto actions = MakeActionSet(100.0);
  CHECK(actions[0].id == 1);
  CHECK(actions[0].di == -1);
  CHECK(actions[0].dj == 0);
  CHECK(actions[4].track_direction == doctest::Approx(90.0));
  CHECK(actions[8].track_direction == doctest::Approx(180.0));
  CHECK(actions[12].track_direction == doctest::Approx(270.0));
  for (int k = 1; k < kActionCount; ++k) {
    CHECK(actions[k].track_direction > actions[k - 1].track_direction);
  }
  CHECK(actions[1].track_length == doctest::Approx(100.0 * std::sqrt(5.0)));
  CHECK(actions[2].track_length == doctest::Approx(100.0 * std::sqrt(2.0)));
}

TEST_CASE("polar lookup") {
  const PolarTable polar = PolarTable::Default();
  SUBCASE("breakpoints") {
    CHECK(polar.BoatSpeed(4.0, 90.0) == doctest::Approx(4.0 * 0.71));
    CHECK(polar.BoatSpeed(10.0, 180.0) == doctest::Approx(4.8));
  }
  SUBCASE("bilinear between breakpoints") {
    // Hand interpolation: twa 100 lies halfway between 90 and 110, tws 5
    // halfway between 4 and 6.
    const double a = 0.5 * (4 * 0.71 + 6 * 0.71);
    const double b = 0.5 * (4 * 0.74 + 6 * 0.74);
    CHECK(polar.BoatSpeed(5.0, 100.0) == doctest::Approx(0.5 * (a + b)));
    CHECK(polar.BoatSpeed(3.0, 90.0) == doctest::Approx(0.5 * (1.42 + 2.84)));
  }
  SUBCASE("calm and extremes") {
    CHECK(polar.BoatSpeed(0.0, 90.0) == 0.0);
    CHECK(polar.BoatSpeed(1.0, 90.0) == doctest::Approx(0.71));
    CHECK(polar.BoatSpeed(12.0, 90.0) == doctest::Approx(7.1));
  }
}

TEST_CASE("polar csv round trip") {
  const PolarTable t = PolarTable::FromCsvText(
      "twa/tws,2,6\n40,0.8,2.4\n90,1.4,4.2\n180,1.0,3.0\n", 40.0);
  CHECK(t.BoatSpeed(4.0, 90.0) == doctest::Approx(2.8));
  CHECK(t.BoatSpeed(2.0, 135.0) == doctest::Approx(1.2));
  CHECK_THROWS(PolarTable::FromCsvText("twa,2,6\n40,0.8\n", 40.0));
  CHECK_THROWS(PolarTable::FromCsvText("twa,6,2\n40,0.8,1\n90,1,1\n", 40.0));
}

TEST_CASE("actual speed") {
  const PolarTable polar = PolarTable::Default();
  SUBCASE("no wind, no propulsion") {
    for (double track = 0.0; track < 360.0; track += 15.0) {
      CHECK(ActualSpeed({0.0, 0.0}, track, polar) == 0.0);
    }
  }
  SUBCASE("inside the no-go zone") {
    const double expect = 0.95 * polar.BoatSpeed(6.0, 40.0);
    CHECK(ActualSpeed({6.0, 0.0}, 20.0, polar) == doctest::Approx(expect));
    CHECK(ActualSpeed({6.0, 0.0}, 340.0, polar) == doctest::Approx(expect));
    CHECK(ActualSpeed({6.0, 10.0}, 10.0, polar) == doctest::Approx(expect));
  }
  SUBCASE("continuous up to the penalty at the no-go edge") {
    const double inside = ActualSpeed({6.0, 0.0}, 40.0, polar);
    const double outside = ActualSpeed({6.0, 0.0}, 40.0 + 1e-9, polar);
    CHECK(inside == doctest::Approx(0.95 * outside).epsilon(1e-6));
  }
  SUBCASE("non-decreasing in wind speed") {
    for (double twa = 0.0; twa <= 180.0; twa += 5.0) {
      double prev = 0.0;
      for (double tws = 0.0; tws <= 12.0; tws += 0.25) {
        const double v = ActualSpeed({tws, 0.0}, twa, polar);
        CHECK(v >= prev - 1e-12);
        prev = v;
      }
    }
  }
}

TEST_CASE("effective speed adds the along-track current") {
  CHECK(EffectiveSpeed(2.0, 90.0, {0.0, 0.0}) == 2.0);
  CHECK(EffectiveSpeed(2.0, 90.0, {1.0, 90.0}) == doctest::Approx(3.0));
  CHECK(EffectiveSpeed(0.5, 90.0, {1.0, 270.0}) == doctest::Approx(-0.5));
  CHECK(EffectiveSpeed(1.0, 0.0, {1.0, 90.0}) == doctest::Approx(1.0));
}

TEST_CASE("track decomposition") {
  const GridSpec grid;
  const auto actions = MakeActionSet(grid.cell_size);
  SUBCASE("unit move splits evenly") {
    const auto seg = DecomposeTrack(grid, {4, 4}, actions[ActionIndex(1, 0)]);
    REQUIRE(seg.size() == 2);
    CHECK(seg[0].cell == Cell{4, 4});
    CHECK(seg[1].cell == Cell{5, 4});
    CHECK(seg[0].length == doctest::Approx(50.0));
    CHECK(seg[1].length == doctest::Approx(50.0));
  }
  SUBCASE("diagonal passes through a corner") {
    const auto seg = DecomposeTrack(grid, {4, 4}, actions[ActionIndex(1, 1)]);
    REQUIRE(seg.size() == 2);
    CHECK(seg[0].cell == Cell{4, 4});
    CHECK(seg[1].cell == Cell{5, 5});
    CHECK(seg[0].length == doctest::Approx(70.7107).epsilon(1e-5));
    CHECK(seg[1].length == doctest::Approx(70.7107).epsilon(1e-5));
  }
  SUBCASE("knight moves match fine sampling") {
    for (int a = 0; a < kActionCount; ++a) {
      const ActionSpec& act = actions[a];
      const auto seg = DecomposeTrack(grid, {4, 4}, act);
      double total = 0.0;
      for (const auto& s : seg) total += s.length;
      CHECK(total == doctest::Approx(act.track_length).epsilon(1e-12));
      // Per-cell length by 0.01 m sampling.
      const double step = 0.01;
      const long n = std::lround(act.track_length / step);
      for (const auto& s : seg) {
        long inside = 0;
        for (long k = 0; k < n; ++k) {
          const double t = (k + 0.5) / n;
          const Cell c{static_cast<int>(std::floor(4.5 + t * act.di)),
                       static_cast<int>(std::floor(4.5 + t * act.dj))};
          if (c == s.cell) ++inside;
        }
        CHECK(inside * act.track_length / n ==
              doctest::Approx(s.length).epsilon(1e-3));
      }
    }
    CHECK(DecomposeTrack(grid, {4, 4}, actions[ActionIndex(2, 1)]).size() == 4);
  }
}

TEST_CASE("action evaluation") {
  const GridSpec grid;
  const ActionCatalog catalog(grid);
  const PolarTable polar = PolarTable::Default();
  // Beam reach in 4 m/s wind gives 2.84 m/s; a 0.84 m/s head current leaves
  // exactly 2 m/s along a southward track.
  const FlowField field = UniformField(grid, {4.0, 90.0}, {0.84, 0.0});
  SUBCASE("time is distance over speed") {
    const auto r =
        EvaluateAction(catalog, {0, 0}, field, ActionIndex(1, 0), polar, 300.0);
    CHECK(r.feasible);
    CHECK(r.total_time == doctest::Approx(50.0));
    CHECK(r.distance == doctest::Approx(100.0));
    CHECK(r.destination == Cell{1, 0});
  }
  SUBCASE("off the map") {
    const auto r =
        EvaluateAction(catalog, {0, 0}, field, ActionIndex(-1, 0), polar, 300.0);
    CHECK_FALSE(r.feasible);
  }
  SUBCASE("time budget") {
    // 100 m at 100/301 m/s takes 301 s.
    const FlowField slow = UniformField(grid, {0.0, 0.0}, {100.0 / 301.0, 180.0});
    const auto r =
        EvaluateAction(catalog, {0, 0}, slow, ActionIndex(1, 0), polar, 300.0);
    CHECK(r.total_time == doctest::Approx(301.0));
    CHECK_FALSE(r.feasible);
    CHECK(EvaluateAction(catalog, {0, 0}, slow, ActionIndex(1, 0), polar, 302.0)
              .feasible);
  }
  SUBCASE("speed floor") {
    const FlowField against = UniformField(grid, {4.0, 90.0}, {2.84, 0.0});
    const auto r =
        EvaluateAction(catalog, {0, 0}, against, ActionIndex(1, 0), polar, 300.0);
    CHECK_FALSE(r.feasible);
    CHECK(std::isinf(r.total_time));
    CHECK(TraversalTime(catalog, {0, 0}, against, ActionIndex(1, 0), polar,
                        300.0) < 0.0);
  }
  SUBCASE("matches numeric integration on a random field") {
    const FlowField random = GenerateStageFields(11, 0, grid, FieldBounds{});
    for (int a = 0; a < kActionCount; ++a) {
      const auto r =
          EvaluateAction(catalog, {4, 5}, random, a, polar, 1e9, 0.05);
      const auto& act = catalog.action(a);
      const double oracle_time = oracle::IntegratedTraversalTime(
          grid, random, polar, {4, 5}, act.di, act.dj, 0.01, 0.05);
      if (std::isinf(oracle_time)) {
        CHECK_FALSE(r.feasible);
      } else {
        REQUIRE(r.feasible);
        CHECK(r.total_time == doctest::Approx(oracle_time).epsilon(1e-3));
      }
    }
  }
}

}  // namespace
}  // namespace sailcover
