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


#include <cmath>
#include <cstdlib>

#include "kernel_common.hpp"
#include "rotguard/geometry.hpp"

namespace rotguard::geometry {

Size rotated_canvas_size(int width, int height, AngleDeg angle) {
  switch (angle.value()) {
    case 0:
    case 180:
      return {width, height};
    case 90:
    case 270:
      return {height, width};
    default:
      break;
  }
  const auto [c, s] = detail::rotation_of(angle);
  const double ac = std::abs(c);
  const double as = std::abs(s);
  const double w = width * ac + height * as;
  const double h = width * as + height * ac;
  return {static_cast<int>(std::ceil(w - detail::kGeomEps)), static_cast<int>(std::ceil(h - detail::kGeomEps))};
}

int circular_diff(AngleDeg a, AngleDeg b) noexcept {
  const int d = std::abs(a.value() - b.value());
  return d <= 180 ? d : 360 - d;
}

}  // namespace rotguard::geometry
