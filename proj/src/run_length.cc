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

#include "sailcover/run_length.h"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>

namespace sailcover {

namespace {

// First column >= 'from' whose bit equals 'value', or 'cols'.
int FindNext(const uint64_t* row, int from, int cols, bool value) {
  if (from >= cols) return cols;
  int idx = from >> 6;
  uint64_t word = value ? row[idx] : ~row[idx];
  word &= ~0ULL << (from & 63);
  while (word == 0) {
    ++idx;
    if (idx * 64 >= cols) return cols;
    word = value ? row[idx] : ~row[idx];
  }
  return std::min(idx * 64 + std::countr_zero(word), cols);
}

// Offsets of each row's first run; size rows + 1.
std::vector<int> RowStarts(const RunSet& set) {
  std::vector<int> starts(set.rows() + 1, 0);
  for (const Run& run : set.runs()) ++starts[run.row + 1];
  std::partial_sum(starts.begin(), starts.end(), starts.begin());
  return starts;
}

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Unite(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

using Point = std::pair<int64_t, int64_t>;

int64_t Cross(const Point& o, const Point& a, const Point& b) {
  return (a.first - o.first) * (b.second - o.second) -
         (a.second - o.second) * (b.first - o.first);
}

}  // namespace

long PixelMask::count() const {
  return static_cast<long>(std::count(bits.begin(), bits.end(), 1));
}

RunSet RunSet::FromMask(const PixelMask& mask) {
  RunSet set(mask.rows, mask.cols);
  for (int r = 0; r < mask.rows; ++r) {
    int c = 0;
    while (c < mask.cols) {
      while (c < mask.cols && !mask.at(r, c)) ++c;
      if (c >= mask.cols) break;
      const int begin = c;
      while (c < mask.cols && mask.at(r, c)) ++c;
      set.runs_.push_back({r, begin, c});
    }
  }
  return set;
}

RunSet RunSet::FromBitRows(int rows, int cols, std::span<const uint64_t> words,
                           int words_per_row, bool value) {
  RunSet set(rows, cols);
  set.runs_.reserve(static_cast<size_t>(rows) * 4);
  for (int r = 0; r < rows; ++r) {
    const uint64_t* row = words.data() + static_cast<size_t>(r) * words_per_row;
    int c = FindNext(row, 0, cols, value);
    while (c < cols) {
      const int end = FindNext(row, c, cols, !value);
      set.runs_.push_back({r, c, end});
      c = FindNext(row, end, cols, value);
    }
  }
  return set;
}

long RunSet::area() const {
  long total = 0;
  for (const Run& run : runs_) total += run.length();
  return total;
}

void RunSet::Append(const Run& run) { runs_.push_back(run); }

RunSet RunSet::Complement() const {
  RunSet out(rows_, cols_);
  out.runs_.reserve(runs_.size() + rows_);
  size_t k = 0;
  for (int r = 0; r < rows_; ++r) {
    int c = 0;
    while (k < runs_.size() && runs_[k].row == r) {
      if (runs_[k].begin > c) out.runs_.push_back({r, c, runs_[k].begin});
      c = runs_[k].end;
      ++k;
    }
    if (c < cols_) out.runs_.push_back({r, c, cols_});
  }
  return out;
}

PixelMask RunSet::ToMask() const {
  PixelMask mask(rows_, cols_);
  for (const Run& run : runs_) {
    for (int c = run.begin; c < run.end; ++c) mask.set(run.row, c);
  }
  return mask;
}

RunSet Union(const RunSet& a, const RunSet& b) {
  RunSet out(a.rows(), a.cols());
  const auto& ra = a.runs();
  const auto& rb = b.runs();
  out.Reserve(ra.size() + rb.size());
  size_t i = 0;
  size_t j = 0;
  bool open = false;
  Run current;
  while (i < ra.size() || j < rb.size()) {
    const bool take_a =
        j >= rb.size() ||
        (i < ra.size() && (ra[i].row < rb[j].row ||
                           (ra[i].row == rb[j].row &&
                            ra[i].begin <= rb[j].begin)));
    const Run next = take_a ? ra[i++] : rb[j++];
    if (open && next.row == current.row && next.begin <= current.end) {
      current.end = std::max(current.end, next.end);
      continue;
    }
    if (open) out.Append(current);
    current = next;
    open = true;
  }
  if (open) out.Append(current);
  return out;
}

RunComponents LabelComponents(const RunSet& set) {
  const auto& runs = set.runs();
  const int n = static_cast<int>(runs.size());
  DisjointSets sets(n);
  const std::vector<int> starts = RowStarts(set);
  for (int r = 0; r + 1 < set.rows(); ++r) {
    int a = starts[r];
    int b = starts[r + 1];
    const int a_end = starts[r + 1];
    const int b_end = starts[r + 2];
    while (a < a_end && b < b_end) {
      if (runs[a].begin < runs[b].end && runs[b].begin < runs[a].end) {
        sets.Unite(a, b);
      }
      if (runs[a].end < runs[b].end) {
        ++a;
      } else if (runs[b].end < runs[a].end) {
        ++b;
      } else {
        ++a;
        ++b;
      }
    }
  }

  // Components in order of their first run.
  std::vector<int> slot(n, -1);
  std::vector<int> label(n);
  std::vector<long> areas;
  std::vector<size_t> counts;
  for (int k = 0; k < n; ++k) {
    const int root = sets.Find(k);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(areas.size());
      areas.push_back(0);
      counts.push_back(0);
    }
    label[k] = slot[root];
    areas[label[k]] += runs[k].length();
    ++counts[label[k]];
  }

  std::vector<int> order(areas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return areas[x] > areas[y]; });
  std::vector<int> rank(order.size());
  RunComponents out;
  out.components.reserve(order.size());
  out.areas.reserve(order.size());
  for (size_t r = 0; r < order.size(); ++r) {
    rank[order[r]] = static_cast<int>(r);
    out.components.emplace_back(set.rows(), set.cols());
    out.components.back().Reserve(counts[order[r]]);
    out.areas.push_back(areas[order[r]]);
  }
  for (int k = 0; k < n; ++k) out.components[rank[label[k]]].Append(runs[k]);
  return out;
}

long EdgePerimeter(const RunSet& set) {
  const auto& runs = set.runs();
  const std::vector<int> starts = RowStarts(set);
  long vertical_contacts = 0;
  for (int r = 0; r + 1 < set.rows(); ++r) {
    int a = starts[r];
    int b = starts[r + 1];
    const int a_end = starts[r + 1];
    const int b_end = starts[r + 2];
    while (a < a_end && b < b_end) {
      const int overlap = std::min(runs[a].end, runs[b].end) -
                          std::max(runs[a].begin, runs[b].begin);
      if (overlap > 0) vertical_contacts += overlap;
      if (runs[a].end < runs[b].end) {
        ++a;
      } else {
        ++b;
      }
    }
  }
  // 4A - 2(horizontal + vertical contacts), horizontal = A - #runs.
  return 2 * set.area() + 2 * static_cast<long>(runs.size()) -
         2 * vertical_contacts;
}

double CenterHullArea(const RunSet& set) {
  // Only the outermost pixel of each row can be a hull vertex. Points are
  // (2 row + 1, 2 col + 1) so pixel centers stay integral, and runs arrive
  // ordered by row then column, which is the order the chain needs.
  const auto& runs = set.runs();
  std::vector<Point> pts;
  pts.reserve(2 * static_cast<size_t>(set.rows()));
  for (size_t k = 0; k < runs.size();) {
    size_t last = k;
    while (last + 1 < runs.size() && runs[last + 1].row == runs[k].row) ++last;
    const int64_t y = 2 * static_cast<int64_t>(runs[k].row) + 1;
    const int64_t left = 2 * static_cast<int64_t>(runs[k].begin) + 1;
    const int64_t right = 2 * static_cast<int64_t>(runs[last].end) - 1;
    pts.emplace_back(y, left);
    if (right > left) pts.emplace_back(y, right);
    k = last + 1;
  }
  if (pts.size() < 3) return 0.0;

  std::vector<Point> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return 0.0;

  int64_t twice_area = 0;
  for (size_t i = 0; i < hull.size(); ++i) {
    const Point& p = hull[i];
    const Point& q = hull[(i + 1) % hull.size()];
    twice_area += p.first * q.second - q.first * p.second;
  }
  return static_cast<double>(std::llabs(twice_area)) / 8.0;
}

RunSet FillSmallHoles(const RunSet& set, double max_hole_pixels) {
  const RunComponents voids = LabelComponents(set.Complement());
  RunSet filled = set;
  for (size_t c = 0; c < voids.components.size(); ++c) {
    if (!(static_cast<double>(voids.areas[c]) < max_hole_pixels)) continue;
    bool touches_border = false;
    for (const Run& run : voids.components[c].runs()) {
      if (run.row == 0 || run.row == set.rows() - 1 || run.begin == 0 ||
          run.end == set.cols()) {
        touches_border = true;
        break;
      }
    }
    if (!touches_border) filled = Union(filled, voids.components[c]);
  }
  return filled;
}

}  // namespace sailcover
