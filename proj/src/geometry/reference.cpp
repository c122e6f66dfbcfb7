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


// Straight-line serial versions of the geometry kernels. They evaluate the
// same per-pixel expressions as the OpenMP kernels but without hoisting,
// lookup tables, masks or fast paths.

#include <algorithm>
#include <cmath>
#include <string>

#include "kernel_common.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/geometry.hpp"

namespace rotguard::geometry::reference {

Image rotate_with_pad(const Image& img, AngleDeg angle) {
  const int w = img.width();
  const int h = img.height();
  const Size canvas = rotated_canvas_size(w, h, angle);
  Image out(canvas.width, canvas.height);

  if (angle.is_right_angle()) {
    for (int y = 0; y < canvas.height; ++y) {
      for (int x = 0; x < canvas.width; ++x) {
        int sx = x, sy = y;
        if (angle.value() == 90) {
          sx = w - 1 - y;
          sy = x;
        } else if (angle.value() == 180) {
          sx = w - 1 - x;
          sy = h - 1 - y;
        } else if (angle.value() == 270) {
          sx = y;
          sy = h - 1 - x;
        }
        for (int ch = 0; ch < 3; ++ch) out.pixel(x, y)[ch] = img.pixel(sx, sy)[ch];
      }
    }
    return out;
  }

  const auto [c, s] = detail::rotation_of(angle);
  const double cxs = detail::center_of(w);
  const double cys = detail::center_of(h);
  const double cxd = detail::center_of(canvas.width);
  const double cyd = detail::center_of(canvas.height);

  for (int y = 0; y < canvas.height; ++y) {
    for (int x = 0; x < canvas.width; ++x) {
      const double dx = x - cxd;
      const double dy = y - cyd;
      double u = cxs + dx * c - dy * s;
      double v = cys + dx * s + dy * c;
      const bool inside = u >= -detail::kGeomEps && u <= (w - 1) + detail::kGeomEps &&
                          v >= -detail::kGeomEps && v <= (h - 1) + detail::kGeomEps;
      if (!inside) continue;

      u = std::min(std::max(u, 0.0), static_cast<double>(w - 1));
      v = std::min(std::max(v, 0.0), static_cast<double>(h - 1));
      int x0 = static_cast<int>(u);
      int y0 = static_cast<int>(v);
      if (x0 >= w - 1) x0 = std::max(w - 2, 0);
      if (y0 >= h - 1) y0 = std::max(h - 2, 0);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = u - x0;
      const double fy = v - y0;

      const int tx[4] = {x0, x1, x0, x1};
      const int ty[4] = {y0, y0, y1, y1};
      const double wt[4] = {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy};

      double coverage = 0.0;
      double acc[3] = {0.0, 0.0, 0.0};
      for (int k = 0; k < 4; ++k) {
        const std::uint8_t* p = img.pixel(tx[k], ty[k]);
        if (p[0] == 0 && p[1] == 0 && p[2] == 0) continue;
        coverage += wt[k];
        for (int ch = 0; ch < 3; ++ch) acc[ch] += wt[k] * p[ch];
      }
      if (coverage < detail::kMinCoverage) continue;
      for (int ch = 0; ch < 3; ++ch) out.pixel(x, y)[ch] = detail::round_channel(acc[ch] / coverage);
    }
  }
  return out;
}

Image trim_black_padding(const Image& img, std::uint8_t black_threshold) {
  auto dark = [&](int x, int y) {
    const std::uint8_t* p = img.pixel(x, y);
    return p[0] <= black_threshold && p[1] <= black_threshold && p[2] <= black_threshold;
  };
  int top = 0, bottom = img.height() - 1, left = 0, right = img.width() - 1;
  auto row_dark = [&](int y) {
    for (int x = left; x <= right; ++x)
      if (!dark(x, y)) return false;
    return true;
  };
  auto col_dark = [&](int x) {
    for (int y = top; y <= bottom; ++y)
      if (!dark(x, y)) return false;
    return true;
  };

  for (;;) {
    if (top > bottom || left > right) {
      throw AllBlack("every pixel is at or below the black threshold " + std::to_string(black_threshold));
    }
    if (row_dark(top)) {
      ++top;
    } else if (row_dark(bottom)) {
      --bottom;
    } else if (col_dark(left)) {
      ++left;
    } else if (col_dark(right)) {
      --right;
    } else {
      break;
    }
  }

  Image out(right - left + 1, bottom - top + 1);
  for (int y = top; y <= bottom; ++y)
    for (int x = left; x <= right; ++x)
      for (int ch = 0; ch < 3; ++ch) out.pixel(x - left, y - top)[ch] = img.pixel(x, y)[ch];
  return out;
}

Image resize(const Image& img, int target_w, int target_h) {
  if (target_w < 1 || target_h < 1) {
    throw InvalidImage("resize target must be >= 1x1");
  }
  const int w = img.width();
  const int h = img.height();
  Image out(target_w, target_h);
  const double sx_scale = static_cast<double>(w) / target_w;
  const double sy_scale = static_cast<double>(h) / target_h;

  for (int y = 0; y < target_h; ++y) {
    for (int x = 0; x < target_w; ++x) {
      double sx = (x + 0.5) * sx_scale - 0.5;
      double sy = (y + 0.5) * sy_scale - 0.5;
      sx = std::min(std::max(sx, 0.0), static_cast<double>(w - 1));
      sy = std::min(std::max(sy, 0.0), static_cast<double>(h - 1));
      int x0 = static_cast<int>(sx);
      int y0 = static_cast<int>(sy);
      if (x0 >= w - 1) x0 = std::max(w - 2, 0);
      if (y0 >= h - 1) y0 = std::max(h - 2, 0);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = sx - x0;
      const double fy = sy - y0;
      for (int ch = 0; ch < 3; ++ch) {
        const double top = (1.0 - fx) * img.pixel(x0, y0)[ch] + fx * img.pixel(x1, y0)[ch];
        const double bottom = (1.0 - fx) * img.pixel(x0, y1)[ch] + fx * img.pixel(x1, y1)[ch];
        out.pixel(x, y)[ch] = detail::round_channel((1.0 - fy) * top + fy * bottom);
      }
    }
  }
  return out;
}

}  // namespace rotguard::geometry::reference
