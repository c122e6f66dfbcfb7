/* Copyright 2026 The rotguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */


// Independent geometry oracles shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>

#include "rotguard/geometry.hpp"
#include "rotguard/image.hpp"

namespace rotguard::testing {

// Bounding box of the four rotated corners of a W x H rectangle, computed in
// long double and independently of the library's closed form.
inline geometry::Size corner_bbox(int w, int h, int deg) {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double t = deg * pi / 180.0L;
  const long double c = std::cos(t), s = std::sin(t);
  long double lo_x = 1e30L, hi_x = -1e30L, lo_y = 1e30L, hi_y = -1e30L;
  for (int cx : {-1, 1}) {
    for (int cy : {-1, 1}) {
      const long double x = cx * w / 2.0L, y = cy * h / 2.0L;
      const long double rx = x * c - y * s, ry = x * s + y * c;
      lo_x = std::min(lo_x, rx);
      hi_x = std::max(hi_x, rx);
      lo_y = std::min(lo_y, ry);
      hi_y = std::max(hi_y, ry);
    }
  }
  // Values within 1e-9 of an integer are that integer (cos 90 is not exactly 0).
  auto snap_ceil = [](long double v) {
    const long double r = std::round(v);
    return static_cast<int>(std::fabs(v - r) < 1e-9L ? r : std::ceil(v));
  };
  return {snap_ceil(hi_x - lo_x), snap_ceil(hi_y - lo_y)};
}

// Where a source pixel lands under an exact CCW quarter-turn, written in the
// forward direction (source -> destination).
inline void forward_right_angle(int w, int h, int deg, int sx, int sy, int& dx, int& dy) {
  switch (deg) {
    case 0: dx = sx; dy = sy; break;
    case 90: dx = sy; dy = w - 1 - sx; break;
    case 180: dx = w - 1 - sx; dy = h - 1 - sy; break;
    default: dx = h - 1 - sy; dy = sx; break;  // 270
  }
}

inline Image expected_permutation(const Image& img, int deg) {
  const bool swap = deg == 90 || deg == 270;
  Image out(swap ? img.height() : img.width(), swap ? img.width() : img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      int dx, dy;
      forward_right_angle(img.width(), img.height(), deg, x, y, dx, dy);
      std::copy_n(img.pixel(x, y), 3, out.pixel(dx, dy));
    }
  }
  return out;
}

}  // namespace rotguard::testing
