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

#include "sailcover/env_model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sailcover/random.h"

namespace sailcover {

namespace {

constexpr uint64_t kCoarseStream = 0xC0A55E;
constexpr uint64_t kFineStream = 0xF19E;
constexpr uint64_t kForecastStream = 0xF0CA57;

constexpr double kCoarseWeight = 0.6;
constexpr double kFineWeight = 0.4;
constexpr double kSmoothingSigma = 1.0;

// Half-sample symmetric reflection: (d c b a | a b c d | d c b a).
int Reflect(int idx, int n) {
  const int period = 2 * n;
  idx %= period;
  if (idx < 0) idx += period;
  return idx < n ? idx : period - 1 - idx;
}

std::vector<double> GaussianKernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
    sum += kernel[k + radius];
  }
  for (double& w : kernel) w /= sum;
  return kernel;
}

ScalarGrid UniformNoise(uint64_t seed, uint64_t stream, int rows, int cols) {
  ScalarGrid grid(rows, cols);
  for (int k = 0; k < rows * cols; ++k) {
    grid.values[k] = UnitAt({seed, stream, static_cast<uint64_t>(k)});
  }
  return grid;
}

FlowVector Perturb(const FlowVector& truth, double speed_unit, double dir_unit,
                   int k, const ForecastNoise& noise) {
  const double speed_span = k * noise.eps_speed;
  const double dir_span = k * noise.eps_dir_deg;
  double factor = 1.0 + speed_span * (2.0 * speed_unit - 1.0);
  // Keep the speed positive at long horizons.
  factor = std::max(factor, 1e-6);
  return FlowVector{truth.speed * factor,
                    WrapDegrees(truth.direction +
                                dir_span * (2.0 * dir_unit - 1.0))};
}

uint64_t HashDouble(uint64_t h, double v) {
  return Mix64(h ^ std::bit_cast<uint64_t>(v));
}

}  // namespace

void GridSpec::Validate() const {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("grid must have at least one row and column");
  }
  if (!(cell_size > 0.0) || !(d_obs > 0.0) || !(pixel_size > 0.0)) {
    throw std::invalid_argument(
        "cell_size, d_obs and pixel_size must be positive");
  }
  if (pixel_size > cell_size) {
    throw std::invalid_argument("pixel_size must not exceed cell_size");
  }
  const double ratio = cell_size / pixel_size;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw std::invalid_argument(
        "cell_size must be an integer multiple of pixel_size");
  }
}

int GridSpec::pixels_per_cell() const {
  return static_cast<int>(std::lround(cell_size / pixel_size));
}

ScalarGrid GaussianSmooth(const ScalarGrid& in, double sigma) {
  const std::vector<double> kernel = GaussianKernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  ScalarGrid tmp(in.rows, in.cols);
  for (int i = 0; i < in.rows; ++i) {
    for (int j = 0; j < in.cols; ++j) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * in.at(i, Reflect(j + k, in.cols));
      }
      tmp.at(i, j) = acc;
    }
  }
  ScalarGrid out(in.rows, in.cols);
  for (int i = 0; i < in.rows; ++i) {
    for (int j = 0; j < in.cols; ++j) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * tmp.at(Reflect(i + k, in.rows), j);
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

ScalarGrid BilinearUpsample(const ScalarGrid& in, int rows, int cols) {
  ScalarGrid out(rows, cols);
  const auto source = [](int idx, int out_n, int in_n) {
    if (out_n == 1 || in_n == 1) return 0.0;
    return static_cast<double>(idx) * (in_n - 1) / (out_n - 1);
  };
  for (int i = 0; i < rows; ++i) {
    const double y = source(i, rows, in.rows);
    const int y0 = std::min(static_cast<int>(y), in.rows - 1);
    const int y1 = std::min(y0 + 1, in.rows - 1);
    const double fy = y - y0;
    for (int j = 0; j < cols; ++j) {
      const double x = source(j, cols, in.cols);
      const int x0 = std::min(static_cast<int>(x), in.cols - 1);
      const int x1 = std::min(x0 + 1, in.cols - 1);
      const double fx = x - x0;
      const double top = (1.0 - fx) * in.at(y0, x0) + fx * in.at(y0, x1);
      const double bottom = (1.0 - fx) * in.at(y1, x0) + fx * in.at(y1, x1);
      out.at(i, j) = (1.0 - fy) * top + fy * bottom;
    }
  }
  return out;
}

ScalarGrid GenerateScalarField(uint64_t seed, int rows, int cols, double lo,
                               double hi) {
  if (rows < 2 || cols < 2) {
    throw std::invalid_argument("scalar field needs at least 2x2 cells");
  }
  if (!(lo < hi)) {
    throw std::invalid_argument("scalar field range is empty");
  }
  const ScalarGrid coarse = BilinearUpsample(
      GaussianSmooth(UniformNoise(seed, kCoarseStream, 2, 2), kSmoothingSigma),
      rows, cols);
  const ScalarGrid fine = GaussianSmooth(
      UniformNoise(seed, kFineStream, rows, cols), kSmoothingSigma);

  ScalarGrid out(rows, cols);
  for (size_t k = 0; k < out.values.size(); ++k) {
    out.values[k] = kCoarseWeight * coarse.values[k] +
                    kFineWeight * fine.values[k];
  }
  const auto [min_it, max_it] =
      std::minmax_element(out.values.begin(), out.values.end());
  const double vmin = *min_it;
  const double vmax = *max_it;
  const double span = vmax - vmin;
  for (double& v : out.values) {
    if (span <= 0.0) {
      v = lo;
    } else if (v == vmax) {
      v = hi;
    } else if (v == vmin) {
      v = lo;
    } else {
      v = std::clamp(lo + (v - vmin) / span * (hi - lo), lo, hi);
    }
  }
  return out;
}

FlowField GenerateStageFields(uint64_t seed, int stage, const GridSpec& grid,
                              const FieldBounds& bounds) {
  const auto channel = [&](FieldChannel id, double lo, double hi) {
    return GenerateScalarField(
        DeriveSeed({seed, static_cast<uint64_t>(stage),
                    static_cast<uint64_t>(id)}),
        grid.rows, grid.cols, lo, hi);
  };
  const ScalarGrid wind_speed =
      channel(FieldChannel::kWindSpeed, bounds.v_min, bounds.v_max);
  const ScalarGrid wind_dir =
      channel(FieldChannel::kWindDirection, bounds.dir_min, bounds.dir_max);
  const ScalarGrid cur_speed =
      channel(FieldChannel::kCurrentSpeed, bounds.v_min, bounds.v_max);
  const ScalarGrid cur_dir =
      channel(FieldChannel::kCurrentDirection, bounds.dir_min, bounds.dir_max);

  FlowField field(grid.rows, grid.cols);
  for (int k = 0; k < grid.cell_count(); ++k) {
    field.wind[k] = {wind_speed.values[k], WrapDegrees(wind_dir.values[k])};
    field.current[k] = {cur_speed.values[k], WrapDegrees(cur_dir.values[k])};
  }
  return field;
}

FlowField FieldModel::StageField(int stage, const GridSpec& grid) const {
  if (kind == Kind::kRandom) {
    return GenerateStageFields(seed, stage, grid, bounds);
  }
  FlowField field(grid.rows, grid.cols);
  std::fill(field.wind.begin(), field.wind.end(), uniform_wind);
  std::fill(field.current.begin(), field.current.end(), uniform_current);
  return field;
}

const FlowField& ForecastSequence::ForStage(int stage) const {
  const int k = std::clamp(stage - base_stage, 0, horizon());
  return stages[k];
}

ForecastSequence MakeForecast(const FieldModel& model, int stage, int horizon,
                              const GridSpec& grid, double delta_t,
                              const ForecastNoise& noise) {
  if (horizon < 0) throw std::invalid_argument("forecast horizon must be >= 0");
  ForecastSequence forecast;
  forecast.base_stage = stage;
  forecast.base_time = stage * delta_t;
  forecast.delta_t = delta_t;
  forecast.stages.reserve(horizon + 1);
  forecast.stages.push_back(model.StageField(stage, grid));
  for (int k = 1; k <= horizon; ++k) {
    FlowField field = model.StageField(stage + k, grid);
    for (int c = 0; c < grid.cell_count(); ++c) {
      const auto draw = [&](FieldChannel ch) {
        return UnitAt({model.seed, kForecastStream,
                       static_cast<uint64_t>(stage), static_cast<uint64_t>(k),
                       static_cast<uint64_t>(c), static_cast<uint64_t>(ch)});
      };
      field.wind[c] = Perturb(field.wind[c], draw(FieldChannel::kWindSpeed),
                              draw(FieldChannel::kWindDirection), k, noise);
      field.current[c] =
          Perturb(field.current[c], draw(FieldChannel::kCurrentSpeed),
                  draw(FieldChannel::kCurrentDirection), k, noise);
    }
    forecast.stages.push_back(std::move(field));
  }
  return forecast;
}

EnvState::EnvState(const GridSpec& grid, const FieldModel& model,
                   double delta_t, Cell start)
    : grid_(grid), model_(model), delta_t_(delta_t), vessel_(start) {
  grid_.Validate();
  if (!(delta_t > 0.0)) throw std::invalid_argument("delta_t must be positive");
  if (!grid_.Contains(start)) {
    throw std::invalid_argument("start cell outside the grid");
  }
  field_ = model_.StageField(0, grid_);
}

int EnvState::StageAt(double t) const {
  return static_cast<int>(std::floor(t / delta_t_));
}

void EnvState::AdvanceToStage(int stage) {
  if (stage < stage_index_) {
    throw std::invalid_argument("cannot move to an earlier stage (" +
                                std::to_string(stage) + " < " +
                                std::to_string(stage_index_) + ")");
  }
  if (stage == stage_index_) return;
  stage_index_ = stage;
  field_ = model_.StageField(stage, grid_);
}

void EnvState::ExecuteMove(Cell destination, double duration) {
  set_vessel_cell(destination);
  t_ += duration;
  AdvanceToStage(StageAt(t_));
}

void EnvState::WaitUntil(double t) {
  if (t < t_) throw std::invalid_argument("cannot wait backwards in time");
  t_ = t;
  AdvanceToStage(StageAt(t_));
}

void EnvState::set_vessel_cell(Cell c) {
  if (!grid_.Contains(c)) throw std::invalid_argument("vessel cell off the map");
  vessel_ = c;
}

uint64_t EnvState::Checksum() const {
  uint64_t h = DeriveSeed({static_cast<uint64_t>(grid_.rows),
                           static_cast<uint64_t>(grid_.cols),
                           static_cast<uint64_t>(stage_index_),
                           static_cast<uint64_t>(vessel_.i),
                           static_cast<uint64_t>(vessel_.j)});
  h = HashDouble(h, t_);
  for (int k = 0; k < grid_.cell_count(); ++k) {
    h = HashDouble(h, field_.wind[k].speed);
    h = HashDouble(h, field_.wind[k].direction);
    h = HashDouble(h, field_.current[k].speed);
    h = HashDouble(h, field_.current[k].direction);
  }
  return h;
}

void WriteFieldCsvHeader(std::ostream& out) {
  out << "stage,i,j,wind_speed,wind_dir,cur_speed,cur_dir\n";
}

void WriteFieldCsv(std::ostream& out, int stage, const FlowField& field) {
  char line[160];
  for (int i = 0; i < field.rows; ++i) {
    for (int j = 0; j < field.cols; ++j) {
      const FlowVector& w = field.Wind({i, j});
      const FlowVector& c = field.Current({i, j});
      std::snprintf(line, sizeof(line), "%d,%d,%d,%.4f,%.2f,%.4f,%.2f\n",
                    stage, i, j, w.speed, w.direction, c.speed, c.direction);
      out << line;
    }
  }
}

}  // namespace sailcover
