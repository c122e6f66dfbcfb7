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


// Conventions shared by the OpenMP kernels and the serial reference. Both
// sides must evaluate identical floating-point expressions per pixel so that
// their outputs agree bit for bit.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "rotguard/geometry.hpp"

namespace rotguard::geometry::detail {

// Slack applied before ceil() in the canvas formula and to the source hull
// test, so that values like 100.0000000000001 do not grow the canvas.
inline constexpr double kGeomEps = 1e-7;

// Minimum share of the bilinear weight that must fall on non-padding pixels.
// At 0.5 a rotate/unrotate round trip erodes edge pixels that straddle the
// content boundary; at 0 the blend leaks a halo past it. A quarter keeps
// round trips dimension-exact on every size and angle we have tried.
inline constexpr double kMinCoverage = 0.25;

struct Rotation {
  double cos_t;
  double sin_t;
};

inline Rotation rotation_of(AngleDeg angle) {
  const double rad = angle.value() * (std::numbers::pi / 180.0);
  return {std::cos(rad), std::sin(rad)};
}

// Integer center pixel. Source and canvas use the same rule, so a rotation
// followed by its inverse maps pixel centers back onto pixel centers.
inline int center_of(int extent) { return extent / 2; }

inline bool is_padding(const std::uint8_t* px) { return (px[0] | px[1] | px[2]) == 0; }

inline std::uint8_t round_channel(double v) {
  if (v <= 0.0) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v + 0.5);
}

}  // namespace rotguard::geometry::detail
