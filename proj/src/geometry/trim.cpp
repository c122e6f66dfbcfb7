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
#include <string>
#include <vector>

#include "kernel_common.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/geometry.hpp"

namespace rotguard::geometry {

Image trim_black_padding(const Image& img, std::uint8_t black_threshold) {
  const int w = img.width();
  const int h = img.height();

  // 1 where every channel is at or below the threshold.
  std::vector<std::uint8_t> dark(static_cast<std::size_t>(w) * h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = img.row(y);
    std::uint8_t* m = dark.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x, src += 3) {
      m[x] = (src[0] <= black_threshold && src[1] <= black_threshold && src[2] <= black_threshold) ? 1 : 0;
    }
  }

  int top = 0, bottom = h - 1, left = 0, right = w - 1;
  auto row_dark = [&](int y) {
    const std::uint8_t* m = dark.data() + static_cast<std::size_t>(y) * w;
    return std::all_of(m + left, m + right + 1, [](std::uint8_t v) { return v != 0; });
  };
  auto col_dark = [&](int x) {
    for (int y = top; y <= bottom; ++y) {
      if (!dark[static_cast<std::size_t>(y) * w + x]) return false;
    }
    return true;
  };

  // Removing a dark edge can only make the remaining edges darker, so this
  // converges to the same rectangle regardless of edge order.
  bool changed = true;
  while (changed && top <= bottom && left <= right) {
    changed = false;
    while (top <= bottom && row_dark(top)) ++top, changed = true;
    while (bottom >= top && row_dark(bottom)) --bottom, changed = true;
    if (top > bottom) break;
    while (left <= right && col_dark(left)) ++left, changed = true;
    while (right >= left && col_dark(right)) --right, changed = true;
  }
  if (top > bottom || left > right) {
    throw AllBlack("every pixel is at or below the black threshold " + std::to_string(black_threshold));
  }

  if (top == 0 && left == 0 && bottom == h - 1 && right == w - 1) {
    return img;
  }
  const int out_w = right - left + 1;
  const int out_h = bottom - top + 1;
  Image out(out_w, out_h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < out_h; ++y) {
    std::memcpy(out.row(y), img.pixel(left, top + y), static_cast<std::size_t>(out_w) * 3);
  }
  return out;
}

}  // namespace rotguard::geometry
