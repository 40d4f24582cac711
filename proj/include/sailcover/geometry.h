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

#ifndef SAILCOVER_GEOMETRY_H_
#define SAILCOVER_GEOMETRY_H_

#include <cmath>
#include <compare>
#include <numbers>

namespace sailcover {

// Grid cell index. 'i' is the row (grows southward), 'j' the column (grows
// eastward). Cell (0, 0) is the north-west corner of the map.
struct Cell {
  int i = 0;
  int j = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Wraps an angle in degrees into [0, 360).
inline double WrapDegrees(double deg) {
  double wrapped = std::fmod(deg, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  if (wrapped >= 360.0) wrapped = 0.0;
  return wrapped;
}

// Unsigned angular distance between two bearings, in [0, 180].
inline double AngularDistance(double a_deg, double b_deg) {
  const double d = WrapDegrees(a_deg - b_deg);
  return d > 180.0 ? 360.0 - d : d;
}

// Compass bearing (0 = north, 90 = east) of a grid offset.
inline double OffsetBearing(int di, int dj) {
  return WrapDegrees(std::atan2(static_cast<double>(dj),
                                static_cast<double>(-di)) *
                     kRadToDeg);
}

}  // namespace sailcover

#endif  // SAILCOVER_GEOMETRY_H_
