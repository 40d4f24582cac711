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

#include "sailcover/coverage_state.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sailcover {

namespace {

// Mask of bits [lo, hi) within one 64-bit word, 0 <= lo < hi <= 64.
uint64_t BitRange(int lo, int hi) {
  const uint64_t upper = hi >= 64 ? ~0ULL : ((1ULL << hi) - 1);
  return upper & (~0ULL << lo);
}

template <typename Fn>
void ForEachWordSpan(int c_begin, int c_end, Fn&& fn) {
  int c = c_begin;
  while (c < c_end) {
    const int word = c >> 6;
    const int hi = std::min(c_end, (word + 1) * 64);
    fn(word, BitRange(c & 63, hi - word * 64));
    c = hi;
  }
}

}  // namespace

DiskFootprint DiskFootprint::Make(const GridSpec& grid) {
  const int ppc = grid.pixels_per_cell();
  const double half = 0.5 * ppc;
  const double radius = grid.d_obs / grid.pixel_size;
  const double r2 = radius * radius;
  const int reach = static_cast<int>(std::ceil(radius)) + 1;
  DiskFootprint disk;
  for (int r = static_cast<int>(std::floor(half)) - reach;
       r <= static_cast<int>(std::ceil(half)) + reach; ++r) {
    const double dy = r + 0.5 - half;
    int first = 0;
    int last = -1;
    bool any = false;
    for (int c = static_cast<int>(std::floor(half)) - reach;
         c <= static_cast<int>(std::ceil(half)) + reach; ++c) {
      const double dx = c + 0.5 - half;
      if (dx * dx + dy * dy <= r2) {
        if (!any) first = c;
        last = c;
        any = true;
      }
    }
    if (any) disk.rows.push_back({r, first, last + 1});
  }
  return disk;
}

CoverageRaster::CoverageRaster(const GridSpec& grid)
    : grid_(grid),
      disk_(std::make_shared<const DiskFootprint>(DiskFootprint::Make(grid))),
      pixel_rows_(grid.pixel_rows()),
      pixel_cols_(grid.pixel_cols()),
      words_per_row_((grid.pixel_cols() + 63) / 64),
      counts_(static_cast<size_t>(pixel_rows_) * pixel_cols_, 0),
      bits_(static_cast<size_t>(pixel_rows_) * words_per_row_, 0),
      visited_(grid.cell_count(), 0),
      cell_covered_(grid.cell_count(), 0),
      cell_excess_(grid.cell_count(), 0) {
  grid_.Validate();
}

void CoverageRaster::StampVisit(Cell cell) {
  if (!grid_.Contains(cell)) {
    throw std::invalid_argument("stamp outside the grid");
  }
  const int ppc = grid_.pixels_per_cell();
  for (const DiskFootprint::Row& row : disk_->rows) {
    const int r = cell.i * ppc + row.dr;
    if (r < 0 || r >= pixel_rows_) continue;
    const int c0 = std::max(0, cell.j * ppc + row.c_begin);
    const int c1 = std::min(pixel_cols_, cell.j * ppc + row.c_end);
    const int cell_row = (r / ppc) * grid_.cols;
    uint32_t* counts = &counts_[static_cast<size_t>(r) * pixel_cols_];
    uint64_t* bits = &bits_[static_cast<size_t>(r) * words_per_row_];
    for (int c = c0; c < c1; ++c) {
      const int cell_index = cell_row + c / ppc;
      if (counts[c]++ == 0) {
        bits[c >> 6] |= 1ULL << (c & 63);
        ++cell_covered_[cell_index];
        ++covered_total_;
      } else {
        ++cell_excess_[cell_index];
        ++excess_total_;
      }
    }
  }
  visited_[grid_.Index(cell)] = 1;
}

long CoverageRaster::NewlyCoveredPixels(Cell cell) const {
  const int ppc = grid_.pixels_per_cell();
  long fresh = 0;
  for (const DiskFootprint::Row& row : disk_->rows) {
    const int r = cell.i * ppc + row.dr;
    if (r < 0 || r >= pixel_rows_) continue;
    const int c0 = std::max(0, cell.j * ppc + row.c_begin);
    const int c1 = std::min(pixel_cols_, cell.j * ppc + row.c_end);
    const uint64_t* bits = &bits_[static_cast<size_t>(r) * words_per_row_];
    ForEachWordSpan(c0, c1, [&](int word, uint64_t mask) {
      fresh += std::popcount(~bits[word] & mask);
    });
  }
  return fresh;
}

void CoverageRaster::OrDisk(Cell cell, std::vector<uint64_t>& words) const {
  const int ppc = grid_.pixels_per_cell();
  for (const DiskFootprint::Row& row : disk_->rows) {
    const int r = cell.i * ppc + row.dr;
    if (r < 0 || r >= pixel_rows_) continue;
    const int c0 = std::max(0, cell.j * ppc + row.c_begin);
    const int c1 = std::min(pixel_cols_, cell.j * ppc + row.c_end);
    uint64_t* bits = &words[static_cast<size_t>(r) * words_per_row_];
    ForEachWordSpan(c0, c1,
                    [&](int word, uint64_t mask) { bits[word] |= mask; });
  }
}

RunSet CoverageRaster::CoveredRuns() const {
  return RunSet::FromBitRows(pixel_rows_, pixel_cols_, bits_, words_per_row_,
                             true);
}

RunSet CoverageRaster::CoveredRunsWithStamps(
    std::span<const Cell> cells) const {
  std::vector<uint64_t> words = bits_;
  for (const Cell& cell : cells) {
    if (grid_.Contains(cell)) OrDisk(cell, words);
  }
  return RunSet::FromBitRows(pixel_rows_, pixel_cols_, words, words_per_row_,
                             true);
}

RedundancyScore ComputeRedundancy(const CoverageRaster& raster,
                                  double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("redundancy penalty must lie in [0, 1]");
  }
  const int ppc = raster.grid().pixels_per_cell();
  const double pixels_per_cell = static_cast<double>(ppc) * ppc;
  const int cells = raster.grid().cell_count();
  RedundancyScore score;
  score.cell_terms.resize(cells);
  double sum = 0.0;
  for (int k = 0; k < cells; ++k) {
    score.cell_terms[k] =
        raster.cell_covered(k) / pixels_per_cell -
        alpha * raster.cell_excess(k) / pixels_per_cell;
    sum += score.cell_terms[k];
  }
  score.coverage_score = sum / cells;
  score.redundancy_pct =
      raster.covered_pixels() > 0
          ? 100.0 * alpha * static_cast<double>(raster.excess_total()) /
                static_cast<double>(raster.covered_pixels())
          : 0.0;
  return score;
}

double CoverageScore(const CoverageRaster& raster, double alpha) {
  const int ppc = raster.grid().pixels_per_cell();
  const double pixels_per_cell = static_cast<double>(ppc) * ppc;
  const int cells = raster.grid().cell_count();
  double sum = 0.0;
  for (int k = 0; k < cells; ++k) {
    sum += raster.cell_covered(k) / pixels_per_cell -
           alpha * raster.cell_excess(k) / pixels_per_cell;
  }
  return sum / cells;
}

std::vector<ComponentArea> ConnectedComponents(const RunSet& region,
                                               double pixel_size) {
  RunComponents labeled = LabelComponents(region);
  std::vector<ComponentArea> out;
  out.reserve(labeled.components.size());
  for (size_t k = 0; k < labeled.components.size(); ++k) {
    out.push_back({static_cast<double>(labeled.areas[k]) * pixel_size *
                       pixel_size,
                   std::move(labeled.components[k])});
  }
  return out;
}

std::vector<ComponentArea> ConnectedComponents(const PixelMask& region,
                                               double pixel_size) {
  return ConnectedComponents(RunSet::FromMask(region), pixel_size);
}

double ConvexityScore(const RunSet& component) {
  if (component.empty()) {
    throw std::invalid_argument("convexity of an empty component");
  }
  const double hull = CenterHullArea(component);
  if (hull <= 0.0) return 1.0;
  return std::min(static_cast<double>(component.area()) / (hull + 1.0),
                  kScoreCap);
}

double ConvexityScore(const PixelMask& component) {
  return ConvexityScore(RunSet::FromMask(component));
}

double ShapeScore(const RunSet& component, double a_thres,
                  double pixel_size) {
  if (component.empty()) {
    throw std::invalid_argument("shape score of an empty component");
  }
  const RunSet filled =
      FillSmallHoles(component, a_thres / (pixel_size * pixel_size));
  const double area = static_cast<double>(filled.area());
  const double perimeter = static_cast<double>(EdgePerimeter(filled));
  return std::min(4.0 * std::numbers::pi * area / (perimeter * perimeter),
                  kScoreCap);
}

double ShapeScore(const PixelMask& component, double a_thres,
                  double pixel_size) {
  return ShapeScore(RunSet::FromMask(component), a_thres, pixel_size);
}

bool MorphologyReport::SplitsUncovered(double a_thres) const {
  int large = 0;
  for (double area : uncov_component_areas) {
    if (area > a_thres) ++large;
  }
  return large >= 2;
}

MorphologyReport ComputeMorphology(const RunSet& covered, double pixel_size,
                                   double a_thres) {
  const double pixel_area = pixel_size * pixel_size;
  MorphologyReport report;
  const RunComponents cov = LabelComponents(covered);
  if (!cov.components.empty()) {
    const RunSet& largest = cov.components.front();
    report.cov_convex = ConvexityScore(largest);
    report.cov_shape = ShapeScore(largest, a_thres, pixel_size);
    report.largest_cov_area = cov.areas.front() * pixel_area;
  }
  const RunComponents uncov = LabelComponents(covered.Complement());
  if (!uncov.components.empty()) {
    const RunSet& largest = uncov.components.front();
    report.uncov_convex = ConvexityScore(largest);
    report.uncov_shape = ShapeScore(largest, a_thres, pixel_size);
    report.largest_uncov_area = uncov.areas.front() * pixel_area;
  }
  report.uncov_component_areas.reserve(uncov.areas.size());
  for (long a : uncov.areas) {
    report.uncov_component_areas.push_back(a * pixel_area);
  }
  return report;
}

MorphologyReport ComputeMorphology(const CoverageRaster& raster,
                                   double a_thres) {
  return ComputeMorphology(raster.CoveredRuns(), raster.grid().pixel_size,
                           a_thres);
}

bool WouldSplitUncovered(const CoverageRaster& raster,
                         std::span<const Cell> cells, double a_thres) {
  const RunSet covered = raster.CoveredRunsWithStamps(cells);
  const RunComponents uncov = LabelComponents(covered.Complement());
  const double pixel_area = raster.pixel_area();
  int large = 0;
  for (long a : uncov.areas) {
    if (a * pixel_area > a_thres) ++large;
  }
  return large >= 2;
}

void WritePgm(std::ostream& out, const CoverageRaster& raster) {
  uint32_t max_count = 1;
  for (uint32_t v : raster.counts()) max_count = std::max(max_count, v);
  out << "P2\n" << raster.pixel_cols() << ' ' << raster.pixel_rows() << '\n'
      << max_count << '\n';
  for (int r = 0; r < raster.pixel_rows(); ++r) {
    for (int c = 0; c < raster.pixel_cols(); ++c) {
      if (c > 0) out << ' ';
      out << raster.count(r, c);
    }
    out << '\n';
  }
}

}  // namespace sailcover
