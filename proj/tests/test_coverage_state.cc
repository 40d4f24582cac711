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
#include <numbers>
#include <sstream>
#include <vector>

#include "oracles.h"
#include "sailcover/coverage_state.h"
#include "sailcover/random.h"

namespace sailcover {
namespace {

TEST_CASE("disk footprint matches a direct count") {
  const GridSpec grid;
  for (Cell c : {Cell{4, 4}, Cell{0, 0}, Cell{0, 5}, Cell{9, 9}, Cell{9, 3}}) {
    CoverageRaster raster(grid);
    raster.StampVisit(c);
    CHECK(raster.covered_pixels() == oracle::DiskPixels(grid, c));
    for (int r = 0; r < raster.pixel_rows(); ++r) {
      for (int col = 0; col < raster.pixel_cols(); ++col) {
        const double x = (col + 0.5) * grid.pixel_size - (c.j + 0.5) * 100.0;
        const double y = (r + 0.5) * grid.pixel_size - (c.i + 0.5) * 100.0;
        REQUIRE(raster.covered(r, col) == (std::hypot(x, y) <= grid.d_obs));
      }
    }
  }
  // Clipping at a corner keeps roughly a quarter disk.
  CoverageRaster corner(grid);
  corner.StampVisit({0, 0});
  CHECK(corner.covered_pixels() < oracle::DiskPixels(grid, {4, 4}));
}

TEST_CASE("visit counts and excess") {
  const GridSpec grid;
  CoverageRaster raster(grid);
  const long disk = oracle::DiskPixels(grid, {5, 5});
  CHECK(raster.NewlyCoveredPixels({5, 5}) == disk);
  raster.StampVisit({5, 5});
  CHECK(raster.NewlyCoveredPixels({5, 5}) == 0);
  raster.StampVisit({5, 5});
  CHECK(raster.count(110, 110) == 2);
  CHECK(raster.covered_pixels() == disk);
  CHECK(raster.excess_total() == disk);
  CHECK(raster.visited({5, 5}));
  CHECK_FALSE(raster.visited({5, 6}));
  // A neighbor only adds the pixels outside the first disk.
  const long fresh = raster.NewlyCoveredPixels({5, 6});
  raster.StampVisit({5, 6});
  CHECK(raster.covered_pixels() == disk + fresh);
}

TEST_CASE("coverage fraction") {
  const GridSpec grid;
  CoverageRaster single(grid);
  single.StampVisit({4, 4});
  const double disk_fraction =
      std::numbers::pi * grid.d_obs * grid.d_obs / (1000.0 * 1000.0);
  CHECK(single.CoverageFraction() == doctest::Approx(disk_fraction).epsilon(0.02));

  CoverageRaster all(grid);
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) all.StampVisit({i, j});
  }
  CHECK(all.CoverageFraction() >= 0.999);
}

TEST_CASE("redundancy score") {
  const GridSpec grid;
  SUBCASE("empty raster") {
    const CoverageRaster raster(grid);
    const RedundancyScore s = ComputeRedundancy(raster, 0.2);
    CHECK(s.coverage_score == 0.0);
    CHECK(s.redundancy_pct == 0.0);
  }
  SUBCASE("a single full pass scores one") {
    // One 20 m cell whose disk reaches every pixel exactly once.
    GridSpec small;
    small.rows = 1;
    small.cols = 1;
    small.cell_size = 20.0;
    small.pixel_size = 5.0;
    small.d_obs = 30.0;
    CoverageRaster raster(small);
    raster.StampVisit({0, 0});
    CHECK(ComputeRedundancy(raster, 0.2).coverage_score == doctest::Approx(1.0));
    raster.StampVisit({0, 0});
    CHECK(ComputeRedundancy(raster, 0.2).coverage_score == doctest::Approx(0.8));
    CHECK(ComputeRedundancy(raster, 0.2).redundancy_pct == doctest::Approx(20.0));
    CHECK(CoverageScore(raster, 0.2) == doctest::Approx(0.8));
  }
  SUBCASE("matches the per-pixel oracle") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
      CoverageRaster raster(grid);
      const int visits = 1 + rng.Index(60);
      for (int v = 0; v < visits; ++v) {
        raster.StampVisit({rng.Index(10), rng.Index(10)});
      }
      const double alpha = rng.Uniform();
      const RedundancyScore got = ComputeRedundancy(raster, alpha);
      const auto want = oracle::Redundancy(grid, raster.counts(), alpha);
      CHECK(got.coverage_score == doctest::Approx(want.coverage_score));
      CHECK(got.redundancy_pct == doctest::Approx(want.redundancy_pct));
      CHECK(raster.covered_pixels() == want.covered);
      CHECK(raster.excess_total() == want.excess);
      CHECK(CoverageScore(raster, alpha) == doctest::Approx(got.coverage_score));
    }
  }
  SUBCASE("rejects out-of-range penalties") {
    CHECK_THROWS(ComputeRedundancy(CoverageRaster(grid), 1.5));
  }
}

TEST_CASE("hypothetical stamps") {
  const GridSpec grid;
  CoverageRaster raster(grid);
  raster.StampVisit({2, 2});
  const std::vector<Cell> extra = {{2, 3}, {3, 4}};
  const RunSet predicted = raster.CoveredRunsWithStamps(extra);
  for (Cell c : extra) raster.StampVisit(c);
  CHECK(predicted.ToMask().bits == raster.CoveredRuns().ToMask().bits);
}

TEST_CASE("components in square meters") {
  PixelMask m(20, 20);
  for (int c = 0; c < 20; ++c) m.set(10, c);
  const auto comps = ConnectedComponents(RunSet::FromMask(m).Complement(), 5.0);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].area_m2 == doctest::Approx(200 * 25.0));
  CHECK(comps[1].area_m2 == doctest::Approx(180 * 25.0));
}

TEST_CASE("split detection") {
  const GridSpec grid;
  CoverageRaster raster(grid);
  std::vector<Cell> wall;
  for (int j = 0; j < 9; ++j) wall.push_back({5, j});
  for (Cell c : wall) raster.StampVisit(c);
  // A gap at the east edge keeps the free water connected.
  CHECK_FALSE(WouldSplitUncovered(raster, {}, 3000.0));
  const std::vector<Cell> close = {{5, 9}};
  CHECK(WouldSplitUncovered(raster, close, 3000.0));
  // With a huge threshold nothing counts as a split.
  CHECK_FALSE(WouldSplitUncovered(raster, close, 1e9));

  raster.StampVisit({5, 9});
  const MorphologyReport report = ComputeMorphology(raster, 3000.0);
  CHECK(report.SplitsUncovered(3000.0));
  REQUIRE(report.uncov_component_areas.size() == 2);
  CHECK(report.uncov_component_areas[0] >= report.uncov_component_areas[1]);
}

TEST_CASE("morphology of an empty and a partial map") {
  const GridSpec grid;
  CoverageRaster raster(grid);
  MorphologyReport r = ComputeMorphology(raster, 3000.0);
  CHECK(r.cov_convex == 1.0);
  CHECK(r.cov_shape == 1.0);
  CHECK(r.largest_uncov_area == doctest::Approx(1e6));
  raster.StampVisit({4, 4});
  r = ComputeMorphology(raster, 3000.0);
  CHECK(r.largest_cov_area == doctest::Approx(raster.covered_pixels() * 25.0));
  CHECK(r.Regularity() > 0.0);
  CHECK(r.Regularity() <= std::pow(kScoreCap, 4));
  // The uncovered region keeps the disk as a border-free hole larger than
  // A_thres, so it is not filled.
  const PixelMask free_water = raster.CoveredRuns().Complement().ToMask();
  CHECK(r.uncov_shape ==
        doctest::Approx(oracle::Shape(free_water, 3000.0, 5.0)));
  CHECK(r.uncov_shape < oracle::Shape(free_water, 1e9, 5.0));
}

TEST_CASE("pgm dump") {
  const GridSpec grid;
  CoverageRaster raster(grid);
  raster.StampVisit({0, 0});
  raster.StampVisit({0, 0});
  std::ostringstream out;
  WritePgm(out, raster);
  std::istringstream in(out.str());
  std::string magic;
  int w = 0, h = 0, max = 0;
  in >> magic >> w >> h >> max;
  CHECK(magic == "P2");
  CHECK(w == 200);
  CHECK(h == 200);
  CHECK(max == 2);
  long values = 0, sum = 0;
  for (int v; in >> v;) {
    ++values;
    sum += v;
  }
  CHECK(values == 40000);
  CHECK(sum == 2 * raster.covered_pixels());
}

}  // namespace
}  // namespace sailcover
