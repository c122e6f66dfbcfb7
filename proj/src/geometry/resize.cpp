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
#include <vector>

#include "kernel_common.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/geometry.hpp"

namespace rotguard::geometry {

namespace {

struct Tap {
  int i0;
  int i1;
  double f;
};

// Pixel-center aligned source coordinate for each destination index.
std::vector<Tap> make_taps(int src_extent, int dst_extent) {
  std::vector<Tap> taps(dst_extent);
  const double scale = static_cast<double>(src_extent) / dst_extent;
  for (int i = 0; i < dst_extent; ++i) {
    double p = (i + 0.5) * scale - 0.5;
    p = std::clamp(p, 0.0, static_cast<double>(src_extent - 1));
    int i0 = static_cast<int>(p);
    if (i0 >= src_extent - 1) i0 = std::max(src_extent - 2, 0);
    taps[i] = {i0, std::min(i0 + 1, src_extent - 1), p - i0};
  }
  return taps;
}

}  // namespace

Image resize(const Image& img, int target_w, int target_h) {
  if (target_w < 1 || target_h < 1) {
    throw InvalidImage("resize target must be >= 1x1");
  }
  if (target_w == img.width() && target_h == img.height()) {
    return img;
  }

  const std::vector<Tap> xs = make_taps(img.width(), target_w);
  const std::vector<Tap> ys = make_taps(img.height(), target_h);
  Image out(target_w, target_h);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < target_h; ++y) {
    const Tap ty = ys[y];
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < target_w; ++x, dst += 3) {
      const Tap tx = xs[x];
      const std::uint8_t* p00 = img.pixel(tx.i0, ty.i0);
      const std::uint8_t* p10 = img.pixel(tx.i1, ty.i0);
      const std::uint8_t* p01 = img.pixel(tx.i0, ty.i1);
      const std::uint8_t* p11 = img.pixel(tx.i1, ty.i1);
      for (int ch = 0; ch < 3; ++ch) {
        const double top = (1.0 - tx.f) * p00[ch] + tx.f * p10[ch];
        const double bottom = (1.0 - tx.f) * p01[ch] + tx.f * p11[ch];
        dst[ch] = detail::round_channel((1.0 - ty.f) * top + ty.f * bottom);
      }
    }
  }
  return out;
}

}  // namespace rotguard::geometry
