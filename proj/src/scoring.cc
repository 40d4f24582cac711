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

#include "sailcover/scoring.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sailcover {

void ScoreParams::Validate() const {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  if (!(beta > 0.0) || beta > 1.0) {
    throw std::invalid_argument("beta must lie in (0, 1]");
  }
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (!(p_min > 0.0) || p_max < p_min) {
    throw std::invalid_argument("p range must be positive and ordered");
  }
}

PositionWeights::PositionWeights(const GridSpec& grid,
                                 double distance_exponent)
    : cols_(grid.cols),
      distance_(grid.cell_count()),
      weight_(grid.cell_count()),
      factor_(grid.cell_count()) {
  const double cx = 0.5 * grid.cols * grid.cell_size;
  const double cy = 0.5 * grid.rows * grid.cell_size;
  double total = 0.0;
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      const double x = (j + 0.5) * grid.cell_size;
      const double y = (i + 0.5) * grid.cell_size;
      const double d = std::hypot(x - cx, y - cy);
      distance_[i * cols_ + j] = d;
      total += d;
    }
  }
  double smallest = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < distance_.size(); ++k) {
    // A 1x1 map has zero total distance; weight it uniformly.
    weight_[k] = total > 0.0 ? distance_[k] / total
                             : 1.0 / static_cast<double>(distance_.size());
    factor_[k] = std::pow(distance_[k], distance_exponent) * weight_[k];
    if (factor_[k] > 0.0) smallest = std::min(smallest, factor_[k]);
  }
  const double floor_value = std::isfinite(smallest) ? 0.1 * smallest : 1.0;
  for (double& f : factor_) f = std::max(f, floor_value);
}

HeuristicTerms HeuristicScore(const CoverageRaster& before, Cell end,
                              double traversal_time,
                              const PositionWeights& weights, double a_thres,
                              double p) {
  HeuristicTerms terms;
  terms.time = traversal_time;
  terms.position = weights.Factor(end);
  terms.new_pixels = before.NewlyCoveredPixels(end);
  terms.delta_area = terms.new_pixels * before.pixel_area();
  if (terms.new_pixels == 0 || !(traversal_time > 0.0)) return terms;

  const Cell stamp[] = {end};
  const MorphologyReport report = ComputeMorphology(
      before.CoveredRunsWithStamps(stamp), before.grid().pixel_size, a_thres);
  terms.splits_uncovered = report.SplitsUncovered(a_thres);
  terms.efficiency = terms.delta_area / traversal_time;
  terms.regularity = std::pow(report.Regularity(), p);
  terms.score = terms.efficiency * terms.regularity * terms.position;
  return terms;
}

StageSnapshot TakeSnapshot(const CoverageRaster& raster, double elapsed,
                           const ScoreParams& params, double a_thres) {
  StageSnapshot snap;
  snap.regularity = ComputeMorphology(raster, a_thres).Regularity();
  snap.coverage_score = CoverageScore(raster, params.alpha);
  snap.elapsed = elapsed;
  return snap;
}

double RolloutReward(std::span<const StageSnapshot> stages,
                     const ScoreParams& params) {
  double reward = 0.0;
  double discount = 1.0;
  for (const StageSnapshot& stage : stages) {
    if (stage.elapsed > 0.0) {
      const double efficiency = stage.coverage_score / stage.elapsed;
      reward += discount * stage.regularity *
                std::pow(efficiency, params.efficiency_pen_exponent);
    }
    discount *= params.beta;
  }
  return reward;
}

}  // namespace sailcover
