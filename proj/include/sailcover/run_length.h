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

// Binary raster regions stored as horizontal pixel runs. Labeling, hulls and
// perimeters cost O(number of runs) instead of O(number of pixels), which is
// what keeps morphology affordable inside rollouts.

#ifndef SAILCOVER_RUN_LENGTH_H_
#define SAILCOVER_RUN_LENGTH_H_

#include <cstdint>
#include <span>
#include <vector>

namespace sailcover {

// Dense binary mask, row-major.
struct PixelMask {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> bits;

  PixelMask() = default;
  PixelMask(int r, int c) : rows(r), cols(c), bits(r * c, 0) {}
  bool at(int r, int c) const { return bits[r * cols + c] != 0; }
  void set(int r, int c, bool v = true) { bits[r * cols + c] = v ? 1 : 0; }
  long count() const;
};

struct Run {
  int row = 0;
  int begin = 0;  // first column
  int end = 0;    // one past the last column
  int length() const { return end - begin; }
};

// Runs sorted by (row, begin), disjoint and non-adjacent within a row.
class RunSet {
 public:
  RunSet() = default;
  RunSet(int rows, int cols) : rows_(rows), cols_(cols) {}

  static RunSet FromMask(const PixelMask& mask);
  // 'words' holds one bit per pixel, 'words_per_row' 64-bit words per row,
  // least significant bit first.
  static RunSet FromBitRows(int rows, int cols, std::span<const uint64_t> words,
                            int words_per_row, bool value);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Run>& runs() const { return runs_; }
  bool empty() const { return runs_.empty(); }
  long area() const;

  // Appends a run; callers keep the (row, begin) ordering.
  void Append(const Run& run);
  void Reserve(size_t runs) { runs_.reserve(runs); }

  RunSet Complement() const;
  PixelMask ToMask() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Run> runs_;
};

// Union of two run sets over the same raster.
RunSet Union(const RunSet& a, const RunSet& b);

// 4-connected components, largest first (ties by first run position).
struct RunComponents {
  std::vector<RunSet> components;
  std::vector<long> areas;  // pixels
};
RunComponents LabelComponents(const RunSet& set);

// Number of pixel edges between the set and anything outside it (including
// the raster border).
long EdgePerimeter(const RunSet& set);

// Area of the convex hull of pixel centers, in pixel units. Zero when the
// centers are collinear or fewer than three.
double CenterHullArea(const RunSet& set);

// Adds to 'set' every enclosed void (complement component not touching the
// raster border) smaller than 'max_hole_pixels'.
RunSet FillSmallHoles(const RunSet& set, double max_hole_pixels);

}  // namespace sailcover

#endif  // SAILCOVER_RUN_LENGTH_H_
