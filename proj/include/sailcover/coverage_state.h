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

#ifndef SAILCOVER_COVERAGE_STATE_H_
#define SAILCOVER_COVERAGE_STATE_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "sailcover/env_model.h"
#include "sailcover/geometry.h"
#include "sailcover/run_length.h"

namespace sailcover {

// Pixels whose centers lie within d_obs of a cell center, as column
// intervals per pixel row relative to the cell's top-left pixel.
struct DiskFootprint {
  struct Row {
    int dr = 0;
    int c_begin = 0;
    int c_end = 0;
  };
  std::vector<Row> rows;

  static DiskFootprint Make(const GridSpec& grid);
};

// Pixel-level visit counts over the whole map, plus per-cell tallies used
// by the redundancy score.
class CoverageRaster {
 public:
  explicit CoverageRaster(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int pixel_rows() const { return pixel_rows_; }
  int pixel_cols() const { return pixel_cols_; }
  double pixel_area() const { return grid_.pixel_size * grid_.pixel_size; }
  long total_pixels() const {
    return static_cast<long>(pixel_rows_) * pixel_cols_;
  }

  uint32_t count(int r, int c) const { return counts_[r * pixel_cols_ + c]; }
  bool covered(int r, int c) const {
    return (bits_[r * words_per_row_ + (c >> 6)] >> (c & 63)) & 1ULL;
  }
  bool visited(Cell c) const { return visited_[grid_.Index(c)] != 0; }

  // Adds one to every pixel of the observation disk at 'cell' and marks the
  // cell visited.
  void StampVisit(Cell cell);

  // Pixels the disk at 'cell' would cover for the first time.
  long NewlyCoveredPixels(Cell cell) const;

  long covered_pixels() const { return covered_total_; }
  double CoverageFraction() const {
    return static_cast<double>(covered_total_) /
           static_cast<double>(total_pixels());
  }

  // Per-cell pixels with count >= 1 and sum over pixels of max(count-1, 0).
  long cell_covered(int cell_index) const { return cell_covered_[cell_index]; }
  long cell_excess(int cell_index) const { return cell_excess_[cell_index]; }
  long excess_total() const { return excess_total_; }

  RunSet CoveredRuns() const;
  // Covered runs after a hypothetical stamp at each of 'cells'.
  RunSet CoveredRunsWithStamps(std::span<const Cell> cells) const;

  const std::vector<uint32_t>& counts() const { return counts_; }

 private:
  void OrDisk(Cell cell, std::vector<uint64_t>& words) const;

  GridSpec grid_;
  std::shared_ptr<const DiskFootprint> disk_;
  int pixel_rows_;
  int pixel_cols_;
  int words_per_row_;
  std::vector<uint32_t> counts_;
  std::vector<uint64_t> bits_;
  std::vector<uint8_t> visited_;
  std::vector<int32_t> cell_covered_;
  std::vector<int32_t> cell_excess_;
  long covered_total_ = 0;
  long excess_total_ = 0;
};

// Redundancy-aware coverage: U averages, over cells, the covered pixel
// fraction minus alpha times the excess visit fraction. 'redundancy_pct' is
// the alpha-weighted excess mass as a percentage of covered mass.
struct RedundancyScore {
  double coverage_score = 0.0;
  double redundancy_pct = 0.0;
  std::vector<double> cell_terms;
};
RedundancyScore ComputeRedundancy(const CoverageRaster& raster, double alpha);
// U only, without allocating the per-cell terms.
double CoverageScore(const CoverageRaster& raster, double alpha);

// Component metrics on a run-length region, in physical units.
struct ComponentArea {
  double area_m2 = 0.0;
  RunSet pixels;
};
std::vector<ComponentArea> ConnectedComponents(const RunSet& region,
                                               double pixel_size);
std::vector<ComponentArea> ConnectedComponents(const PixelMask& region,
                                               double pixel_size);

constexpr double kScoreCap = 1.05;

// Area over (center hull area + one pixel), capped. Fewer than three
// non-collinear pixel centers score 1.
double ConvexityScore(const RunSet& component);
double ConvexityScore(const PixelMask& component);

// 4 pi A / P^2 after filling enclosed voids smaller than 'a_thres' (m^2),
// with P counted in 4-neighborhood pixel edges; capped.
double ShapeScore(const RunSet& component, double a_thres, double pixel_size);
double ShapeScore(const PixelMask& component, double a_thres,
                  double pixel_size);

struct MorphologyReport {
  double cov_convex = 1.0;
  double uncov_convex = 1.0;
  double cov_shape = 1.0;
  double uncov_shape = 1.0;
  double largest_cov_area = 0.0;    // m^2
  double largest_uncov_area = 0.0;  // m^2
  std::vector<double> uncov_component_areas;  // m^2, descending

  double Regularity() const {
    return cov_convex * uncov_convex * cov_shape * uncov_shape;
  }
  // At least two uncovered components larger than 'a_thres'.
  bool SplitsUncovered(double a_thres) const;
};

// Scores of the largest covered and largest uncovered components. An empty
// region scores 1 on both metrics.
MorphologyReport ComputeMorphology(const RunSet& covered, double pixel_size,
                                   double a_thres);
MorphologyReport ComputeMorphology(const CoverageRaster& raster,
                                   double a_thres);

// True iff stamping all of 'cells' leaves two or more uncovered components
// each larger than 'a_thres'.
bool WouldSplitUncovered(const CoverageRaster& raster,
                         std::span<const Cell> cells, double a_thres);

// Plain PGM (P2) dump of visit counts.
void WritePgm(std::ostream& out, const CoverageRaster& raster);

}  // namespace sailcover

#endif  // SAILCOVER_COVERAGE_STATE_H_
