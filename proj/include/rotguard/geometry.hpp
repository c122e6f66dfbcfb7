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

#pragma once

#include <cstdint>

#include "rotguard/image.hpp"

namespace rotguard::geometry {

struct Size {
  int width;
  int height;
  friend bool operator==(const Size&, const Size&) = default;
};

/// Default per-channel level at or below which a border pixel counts as padding.
inline constexpr std::uint8_t kDefaultBlackThreshold = 2;

/// Size of the canvas that holds a W x H image rotated by `angle`:
/// ceil(|W cos| + |H sin|) by ceil(|W sin| + |H cos|). Right angles are exact.
Size rotated_canvas_size(int width, int height, AngleDeg angle);

/// Rotates `img` counter-clockwise by `angle` about its center pixel onto a
/// black canvas of rotated_canvas_size(). Multiples of 90 degrees are pure
/// pixel permutations. Other angles sample bilinearly; pure black (0,0,0)
/// source pixels are treated as padding and excluded from the blend, and a
/// destination pixel stays black when less than a quarter of its interpolation
/// weight lands on non-padding pixels. Content scale is never changed.
Image rotate_with_pad(const Image& img, AngleDeg angle);

/// Strips outermost rows/columns whose every channel is <= `black_threshold`,
/// edge by edge, until no edge qualifies. Throws AllBlack if nothing remains.
Image trim_black_padding(const Image& img, std::uint8_t black_threshold = kDefaultBlackThreshold);

/// Bilinear resample to exactly target_w x target_h (pixel-center aligned).
Image resize(const Image& img, int target_w, int target_h);

/// min(|a-b|, 360-|a-b|), in [0, 180].
int circular_diff(AngleDeg a, AngleDeg b) noexcept;

/// Single-threaded reference kernels. Bit-for-bit identical output to the
/// OpenMP kernels above; kept for tests and the benchmark.
namespace reference {
Image rotate_with_pad(const Image& img, AngleDeg angle);
Image trim_black_padding(const Image& img, std::uint8_t black_threshold = kDefaultBlackThreshold);
Image resize(const Image& img, int target_w, int target_h);
}  // namespace reference

}  // namespace rotguard::geometry
