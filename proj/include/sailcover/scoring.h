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

#ifndef SAILCOVER_SCORING_H_
#define SAILCOVER_SCORING_H_

#include <span>
#include <vector>

#include "sailcover/coverage_state.h"
#include "sailcover/env_model.h"

namespace sailcover {

struct ScoreParams {
  double alpha = 0.2;    // redundancy penalty
  double beta = 0.2;     // stage discount
  double epsilon = 0.3;  // uniform exploration probability in rollouts
  double p_min = 0.25;   // regularity exponent range for rollouts
  double p_max = 4.0;
  double efficiency_pen_exponent = 2.0;
  double position_distance_exponent = 0.5;

  void Validate() const;
};

// Distance of every cell center from the map center and the normalized
// weights w = d / sum(d).
class PositionWeights {
 public:
  explicit PositionWeights(const GridSpec& grid,
                           double distance_exponent = 0.5);

  double distance(Cell c) const { return distance_[index(c)]; }
  double weight(Cell c) const { return weight_[index(c)]; }
  // d^exponent * w, floored at a tenth of the smallest non-zero value so the
  // exact map center does not zero out the heuristic.
  double Factor(Cell c) const { return factor_[index(c)]; }

 private:
  int index(Cell c) const { return c.i * cols_ + c.j; }

  int cols_;
  std::vector<double> distance_;
  std::vector<double> weight_;
  std::vector<double> factor_;
};

struct HeuristicTerms {
  long new_pixels = 0;
  double delta_area = 0.0;  // m^2
  double time = 0.0;        // s
  double efficiency = 0.0;  // m^2/s
  double regularity = 1.0;  // raised to p
  double position = 0.0;
  double score = 0.0;
  bool splits_uncovered = false;
};

// H = (dA / T) * regularity^p * position for a move ending at 'end' that
// takes 'traversal_time' seconds. Regularity is measured on the raster after
// the hypothetical stamp. A move that covers nothing new scores 0 and cannot
// split the uncovered region.
HeuristicTerms HeuristicScore(const CoverageRaster& before, Cell end,
                              double traversal_time,
                              const PositionWeights& weights, double a_thres,
                              double p);

struct StageSnapshot {
  double regularity = 1.0;
  double coverage_score = 0.0;  // U
  double elapsed = 0.0;         // s
};

StageSnapshot TakeSnapshot(const CoverageRaster& raster, double elapsed,
                           const ScoreParams& params, double a_thres);

// Sum over stages of beta^(k-1) * regularity * (U / T)^2. Stages with no
// elapsed time contribute nothing.
double RolloutReward(std::span<const StageSnapshot> stages,
                     const ScoreParams& params);

}  // namespace sailcover

#endif  // SAILCOVER_SCORING_H_
