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

#ifndef SAILCOVER_ENV_MODEL_H_
#define SAILCOVER_ENV_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sailcover/geometry.h"

namespace sailcover {

// Map geometry. All lengths in meters.
struct GridSpec {
  int rows = 10;
  int cols = 10;
  double cell_size = 100.0;
  double d_obs = 72.0;
  double pixel_size = 5.0;

  // Throws std::invalid_argument when an invariant is broken.
  void Validate() const;

  int pixels_per_cell() const;
  int pixel_rows() const { return rows * pixels_per_cell(); }
  int pixel_cols() const { return cols * pixels_per_cell(); }
  int cell_count() const { return rows * cols; }
  bool Contains(Cell c) const {
    return c.i >= 0 && c.j >= 0 && c.i < rows && c.j < cols;
  }
  int Index(Cell c) const { return c.i * cols + c.j; }
};

// A flow vector as stored in fields. Wind directions are the bearing the
// wind blows FROM; current directions are the bearing the water flows TO.
struct FlowVector {
  double speed = 0.0;      // m/s
  double direction = 0.0;  // degrees in [0, 360)

  friend bool operator==(const FlowVector&, const FlowVector&) = default;
};

// Wind and current for one stage, uniform within each cell.
struct FlowField {
  int rows = 0;
  int cols = 0;
  std::vector<FlowVector> wind;
  std::vector<FlowVector> current;

  FlowField() = default;
  FlowField(int r, int c)
      : rows(r), cols(c), wind(r * c), current(r * c) {}

  const FlowVector& Wind(Cell c) const { return wind[c.i * cols + c.j]; }
  const FlowVector& Current(Cell c) const { return current[c.i * cols + c.j]; }
  FlowVector& Wind(Cell c) { return wind[c.i * cols + c.j]; }
  FlowVector& Current(Cell c) { return current[c.i * cols + c.j]; }

  friend bool operator==(const FlowField&, const FlowField&) = default;
};

struct FieldBounds {
  double v_min = 0.2;
  double v_max = 5.0;
  double dir_min = 0.0;
  double dir_max = 359.0;
};

// Forecast error growth per step: speed error is relative, direction error
// in degrees.
struct ForecastNoise {
  double eps_speed = 0.05;
  double eps_dir_deg = 5.0;
};

// Row-major scalar grid.
struct ScalarGrid {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  ScalarGrid() = default;
  ScalarGrid(int r, int c) : rows(r), cols(c), values(r * c, 0.0) {}
  double& at(int i, int j) { return values[i * cols + j]; }
  double at(int i, int j) const { return values[i * cols + j]; }

  friend bool operator==(const ScalarGrid&, const ScalarGrid&) = default;
};

// Separable Gaussian blur with radius ceil(3 sigma) and symmetric
// (half-sample) reflection at the borders.
ScalarGrid GaussianSmooth(const ScalarGrid& in, double sigma);

// Bilinear resampling with corner alignment.
ScalarGrid BilinearUpsample(const ScalarGrid& in, int rows, int cols);

// Two-scale noise: 0.6 x (smoothed 2x2 noise, upsampled) + 0.4 x (smoothed
// full-size noise), affinely rescaled so the minimum is exactly 'lo' and the
// maximum exactly 'hi'. Requires rows, cols >= 2 and lo < hi.
ScalarGrid GenerateScalarField(uint64_t seed, int rows, int cols, double lo,
                               double hi);

enum class FieldChannel : uint64_t {
  kWindSpeed = 1,
  kWindDirection = 2,
  kCurrentSpeed = 3,
  kCurrentDirection = 4,
};

// True wind and current of one stage. Every stage is generated from its own
// sub-seed, independent of its predecessors.
FlowField GenerateStageFields(uint64_t seed, int stage, const GridSpec& grid,
                              const FieldBounds& bounds);

// Source of true fields. The random model is the multiscale generator; the
// uniform model gives the same wind and current in every cell and stage and
// serves flow-free and analytic scenarios.
struct FieldModel {
  enum class Kind { kRandom, kUniform };

  Kind kind = Kind::kRandom;
  uint64_t seed = 0;
  FieldBounds bounds;
  FlowVector uniform_wind{3.0, 0.0};
  FlowVector uniform_current{0.0, 0.0};

  FlowField StageField(int stage, const GridSpec& grid) const;
};

struct ForecastSequence {
  std::vector<FlowField> stages;  // stages[0] is the truth of 'base_stage'
  int base_stage = 0;
  double base_time = 0.0;
  double delta_t = 300.0;

  int horizon() const { return static_cast<int>(stages.size()) - 1; }
  // Field for an absolute stage index. Stages beyond the horizon reuse the
  // last forecast.
  const FlowField& ForStage(int stage) const;
};

// Stage 'stage' truth at k = 0 followed by K perturbed forecasts. Speeds are
// scaled by a factor drawn from [1 - k eps_v, 1 + k eps_v] and directions
// offset by a draw from [-k eps_theta, k eps_theta]; each draw is addressed
// by (seed, stage, k, cell, channel).
ForecastSequence MakeForecast(const FieldModel& model, int stage, int horizon,
                              const GridSpec& grid, double delta_t,
                              const ForecastNoise& noise);

// The true world: clock, vessel position and the current stage's field.
class EnvState {
 public:
  EnvState(const GridSpec& grid, const FieldModel& model, double delta_t,
           Cell start);

  const GridSpec& grid() const { return grid_; }
  const FieldModel& model() const { return model_; }
  double t() const { return t_; }
  double delta_t() const { return delta_t_; }
  int stage_index() const { return stage_index_; }
  Cell vessel_cell() const { return vessel_; }
  const FlowField& field() const { return field_; }

  // Stage containing time 't'.
  int StageAt(double t) const;

  // Refreshes the cached field. Does not move the clock. Throws
  // std::invalid_argument for a stage earlier than the current one.
  void AdvanceToStage(int stage);

  // Moves the vessel and the clock; the stage follows the clock.
  void ExecuteMove(Cell destination, double duration);
  void WaitUntil(double t);

  void set_vessel_cell(Cell c);

  EnvState Clone() const { return *this; }

  // Order-sensitive digest of the full state, used to compare clones.
  uint64_t Checksum() const;

 private:
  GridSpec grid_;
  FieldModel model_;
  double delta_t_;
  double t_ = 0.0;
  int stage_index_ = 0;
  Cell vessel_;
  FlowField field_;
};

// Writes the debug field dump:
// stage,i,j,wind_speed,wind_dir,cur_speed,cur_dir
void WriteFieldCsvHeader(std::ostream& out);
void WriteFieldCsv(std::ostream& out, int stage, const FlowField& field);

}  // namespace sailcover

#endif  // SAILCOVER_ENV_MODEL_H_
