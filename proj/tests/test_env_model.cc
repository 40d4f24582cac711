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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <set>
#include <thread>
#include <vector>

#include "sailcover/env_model.h"
#include "sailcover/geometry.h"

namespace sailcover {
namespace {

GridSpec Grid10() { return GridSpec{}; }

FieldModel RandomModel(uint64_t seed) {
  FieldModel m;
  m.seed = seed;
  return m;
}

TEST_CASE("scalar field is rescaled exactly onto its bounds") {
  const ScalarGrid g = GenerateScalarField(7, 10, 10, 0.2, 5.0);
  REQUIRE(g.values.size() == 100);
  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  CHECK(*lo == 0.2);
  CHECK(*hi == 5.0);
  for (double v : g.values) {
    CHECK(v >= 0.2);
    CHECK(v <= 5.0);
  }
}

TEST_CASE("scalar field is deterministic in its seed") {
  CHECK(GenerateScalarField(7, 10, 10, 0.2, 5.0) ==
        GenerateScalarField(7, 10, 10, 0.2, 5.0));
  CHECK_FALSE(GenerateScalarField(7, 10, 10, 0.2, 5.0) ==
              GenerateScalarField(8, 10, 10, 0.2, 5.0));
}

TEST_CASE("scalar field rejects degenerate input") {
  CHECK_THROWS_AS(GenerateScalarField(1, 10, 10, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GenerateScalarField(1, 10, 10, 2.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GenerateScalarField(1, 1, 10, 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("gaussian smoothing preserves a constant grid") {
  ScalarGrid g(6, 5);
  std::fill(g.values.begin(), g.values.end(), 3.5);
  const ScalarGrid s = GaussianSmooth(g, 1.0);
  for (double v : s.values) CHECK(v == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("bilinear upsampling keeps corners and interpolates edges") {
  ScalarGrid g(2, 2);
  g.at(0, 0) = 0.0;
  g.at(0, 1) = 1.0;
  g.at(1, 0) = 2.0;
  g.at(1, 1) = 3.0;
  const ScalarGrid up = BilinearUpsample(g, 5, 5);
  CHECK(up.at(0, 0) == 0.0);
  CHECK(up.at(0, 4) == 1.0);
  CHECK(up.at(4, 0) == 2.0);
  CHECK(up.at(4, 4) == 3.0);
  CHECK(up.at(2, 2) == doctest::Approx(1.5));
  CHECK(up.at(0, 2) == doctest::Approx(0.5));
}

TEST_CASE("stage fields differ by stage and repeat for the same stage") {
  const GridSpec grid = Grid10();
  const FieldBounds bounds;
  const FlowField s0 = GenerateStageFields(42, 0, grid, bounds);
  const FlowField s1 = GenerateStageFields(42, 1, grid, bounds);
  CHECK_FALSE(s0 == s1);
  CHECK(GenerateStageFields(42, 3, grid, bounds) ==
        GenerateStageFields(42, 3, grid, bounds));
  for (int k = 0; k < grid.cell_count(); ++k) {
    CHECK(s0.wind[k].speed >= 0.2);
    CHECK(s0.wind[k].speed <= 5.0);
    CHECK(s0.current[k].speed >= 0.2);
    CHECK(s0.current[k].speed <= 5.0);
    CHECK(s0.wind[k].direction >= 0.0);
    CHECK(s0.wind[k].direction < 360.0);
  }
}

TEST_CASE("wind and current channels are not strongly correlated") {
  const GridSpec grid = Grid10();
  std::vector<double> w, c;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const FlowField f = GenerateStageFields(seed, 0, grid, FieldBounds{});
    for (int k = 0; k < grid.cell_count(); ++k) {
      w.push_back(f.wind[k].speed);
      c.push_back(f.current[k].speed);
    }
  }
  const double n = static_cast<double>(w.size());
  double mw = 0, mc = 0;
  for (size_t k = 0; k < w.size(); ++k) {
    mw += w[k] / n;
    mc += c[k] / n;
  }
  double sww = 0, scc = 0, swc = 0;
  for (size_t k = 0; k < w.size(); ++k) {
    sww += (w[k] - mw) * (w[k] - mw);
    scc += (c[k] - mc) * (c[k] - mc);
    swc += (w[k] - mw) * (c[k] - mc);
  }
  CHECK(std::fabs(swc / std::sqrt(sww * scc)) < 0.5);
}

TEST_CASE("zero-horizon forecast is the true field") {
  const GridSpec grid = Grid10();
  const FieldModel model = RandomModel(42);
  const ForecastSequence f =
      MakeForecast(model, 2, 0, grid, 300.0, ForecastNoise{});
  REQUIRE(f.horizon() == 0);
  CHECK(f.stages[0] == model.StageField(2, grid));
  CHECK(f.base_time == 600.0);
  // Stages past the horizon reuse the last forecast.
  CHECK(&f.ForStage(5) == &f.stages[0]);
}

TEST_CASE("forecast errors stay within k times the noise bounds") {
  const GridSpec grid = Grid10();
  const ForecastNoise noise;
  for (uint64_t seed = 0; seed < 3; ++seed) {
    const FieldModel model = RandomModel(seed);
    const ForecastSequence f = MakeForecast(model, 1, 3, grid, 300.0, noise);
    CHECK(f.stages[0] == model.StageField(1, grid));
    for (int k = 1; k <= 3; ++k) {
      const FlowField truth = model.StageField(1 + k, grid);
      for (int c = 0; c < grid.cell_count(); ++c) {
        for (int ch = 0; ch < 2; ++ch) {
          const FlowVector& t = ch ? truth.current[c] : truth.wind[c];
          const FlowVector& p = ch ? f.stages[k].current[c] : f.stages[k].wind[c];
          CHECK(std::fabs(p.speed - t.speed) <=
                k * noise.eps_speed * t.speed + 1e-12);
          CHECK(p.speed > 0.0);
          CHECK(AngularDistance(p.direction, t.direction) <=
                k * noise.eps_dir_deg + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("forecast noise is deterministic") {
  const GridSpec grid = Grid10();
  const FieldModel model = RandomModel(9);
  const auto a = MakeForecast(model, 4, 2, grid, 300.0, ForecastNoise{});
  const auto b = MakeForecast(model, 4, 2, grid, 300.0, ForecastNoise{});
  CHECK(a.stages == b.stages);
}

TEST_CASE("environment clock drives the stage index") {
  const GridSpec grid = Grid10();
  EnvState env(grid, RandomModel(42), 300.0, {0, 0});
  CHECK(env.stage_index() == 0);
  const uint64_t before = env.Checksum();
  env.AdvanceToStage(0);
  CHECK(env.Checksum() == before);

  env.ExecuteMove({1, 0}, 299.0);
  CHECK(env.stage_index() == 0);
  env.ExecuteMove({2, 0}, 1.0);
  CHECK(env.stage_index() == 1);
  env.WaitUntil(1650.0);
  CHECK(env.stage_index() == static_cast<int>(std::floor(1650.0 / 300.0)));
  CHECK(env.field() == GenerateStageFields(42, 5, grid, FieldBounds{}));
  CHECK_THROWS_AS(env.AdvanceToStage(2), std::invalid_argument);
  CHECK_THROWS_AS(env.WaitUntil(10.0), std::invalid_argument);
  CHECK_THROWS_AS(env.set_vessel_cell({10, 0}), std::invalid_argument);
}

TEST_CASE("clones are independent") {
  const GridSpec grid = Grid10();
  EnvState env(grid, RandomModel(1), 300.0, {3, 3});
  EnvState copy = env.Clone();
  copy.set_vessel_cell({5, 5});
  CHECK(env.vessel_cell() == Cell{3, 3});
  const EnvState copy2 = copy.Clone();
  CHECK(copy2.Checksum() == copy.Checksum());
  CHECK(copy2.vessel_cell() == copy.vessel_cell());
  CHECK(copy2.field() == copy.field());
}

TEST_CASE("ten thousand clones mutate in parallel without interference") {
  const GridSpec grid = Grid10();
  const EnvState env(grid, RandomModel(3), 300.0, {0, 0});
  const uint64_t original = env.Checksum();
  constexpr int kClones = 10000;
  std::vector<EnvState> clones(kClones, env);
  std::vector<uint64_t> sums(kClones);
  {
    std::vector<std::jthread> team;
    for (int w = 0; w < 4; ++w) {
      team.emplace_back([&, w] {
        for (int k = w; k < kClones; k += 4) {
          clones[k].ExecuteMove({k % 10, (k / 10) % 10}, 100.0 * (k % 7));
          sums[k] = clones[k].Checksum();
        }
      });
    }
  }
  CHECK(env.Checksum() == original);
  for (int k = 0; k < kClones; ++k) {
    EnvState expect(grid, RandomModel(3), 300.0, {0, 0});
    if (k % 97 != 0) continue;  // spot-check a sample against a serial replay
    expect.ExecuteMove({k % 10, (k / 10) % 10}, 100.0 * (k % 7));
    CHECK(sums[k] == expect.Checksum());
  }
}

TEST_CASE("uniform model gives the same flow everywhere") {
  FieldModel m;
  m.kind = FieldModel::Kind::kUniform;
  m.uniform_wind = {4.0, 90.0};
  m.uniform_current = {0.5, 180.0};
  const FlowField f = m.StageField(7, Grid10());
  for (int k = 0; k < 100; ++k) {
    CHECK(f.wind[k] == FlowVector{4.0, 90.0});
    CHECK(f.current[k] == FlowVector{0.5, 180.0});
  }
}

TEST_CASE("field csv has one row per cell") {
  std::ostringstream out;
  WriteFieldCsvHeader(out);
  WriteFieldCsv(out, 0, GenerateStageFields(1, 0, Grid10(), FieldBounds{}));
  const std::string text = out.str();
  CHECK(text.rfind("stage,i,j,wind_speed,wind_dir,cur_speed,cur_dir\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 101);
}

TEST_CASE("grid validation") {
  GridSpec g;
  CHECK_NOTHROW(g.Validate());
  CHECK(g.pixels_per_cell() == 20);
  g.pixel_size = 7.0;
  CHECK_THROWS_AS(g.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace sailcover
