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


#include <algorithm>
#include <cstring>
#include <vector>

#include "kernel_common.hpp"
#include "rotguard/geometry.hpp"

namespace rotguard::geometry {

namespace {

Image rotate_right_angle(const Image& img, AngleDeg angle) {
  const int w = img.width();
  const int h = img.height();
  const Size canvas = rotated_canvas_size(w, h, angle);
  Image out(canvas.width, canvas.height);

  if (angle.value() == 0) {
    return img;
  }

#pragma omp parallel for schedule(static)
  for (int y = 0; y < canvas.height; ++y) {
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < canvas.width; ++x, dst += 3) {
      const std::uint8_t* src = nullptr;
      switch (angle.value()) {
        case 90:
          src = img.pixel(w - 1 - y, x);
          break;
        case 180:
          src = img.pixel(w - 1 - x, h - 1 - y);
          break;
        default:  // 270
          src = img.pixel(y, h - 1 - x);
          break;
      }
      std::memcpy(dst, src, 3);
    }
  }
  return out;
}

}  // namespace

Image rotate_with_pad(const Image& img, AngleDeg angle) {
  if (angle.is_right_angle()) {
    return rotate_right_angle(img, angle);
  }

  const int w = img.width();
  const int h = img.height();
  const Size canvas = rotated_canvas_size(w, h, angle);
  const auto [c, s] = detail::rotation_of(angle);
  const double cxs = detail::center_of(w);
  const double cys = detail::center_of(h);
  const double cxd = detail::center_of(canvas.width);
  const double cyd = detail::center_of(canvas.height);
  const double u_max = (w - 1) + detail::kGeomEps;
  const double v_max = (h - 1) + detail::kGeomEps;

  // Column terms are shared by every row.
  std::vector<double> col_c(canvas.width);
  std::vector<double> col_s(canvas.width);
  for (int x = 0; x < canvas.width; ++x) {
    const double dx = x - cxd;
    col_c[x] = dx * c;
    col_s[x] = dx * s;
  }

  Image out(canvas.width, canvas.height);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < canvas.height; ++y) {
    const double dy = y - cyd;
    const double dy_s = dy * s;
    const double dy_c = dy * c;
    std::uint8_t* dst = out.row(y);

    for (int x = 0; x < canvas.width; ++x, dst += 3) {
      double u = cxs + col_c[x] - dy_s;
      double v = cys + col_s[x] + dy_c;
      if (u < -detail::kGeomEps || u > u_max || v < -detail::kGeomEps || v > v_max) {
        continue;
      }
      u = std::clamp(u, 0.0, static_cast<double>(w - 1));
      v = std::clamp(v, 0.0, static_cast<double>(h - 1));

      int x0 = static_cast<int>(u);
      int y0 = static_cast<int>(v);
      if (x0 >= w - 1) x0 = std::max(w - 2, 0);
      if (y0 >= h - 1) y0 = std::max(h - 2, 0);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = u - x0;
      const double fy = v - y0;

      const std::uint8_t* taps[4] = {img.pixel(x0, y0), img.pixel(x1, y0), img.pixel(x0, y1), img.pixel(x1, y1)};
      const double weights[4] = {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy};

      double coverage = 0.0;
      double acc[3] = {0.0, 0.0, 0.0};
      for (int k = 0; k < 4; ++k) {
        if (detail::is_padding(taps[k])) continue;
        coverage += weights[k];
        acc[0] += weights[k] * taps[k][0];
        acc[1] += weights[k] * taps[k][1];
        acc[2] += weights[k] * taps[k][2];
      }
      if (coverage < detail::kMinCoverage) {
        continue;
      }
      dst[0] = detail::round_channel(acc[0] / coverage);
      dst[1] = detail::round_channel(acc[1] / coverage);
      dst[2] = detail::round_channel(acc[2] / coverage);
    }
  }
  return out;
}

}  // namespace rotguard::geometry
