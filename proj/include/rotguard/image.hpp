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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rotguard {

/// Owned 8-bit RGB raster, row-major, 3 interleaved channels per pixel.
/// Width and height are always >= 1.
class Image {
 public:
  static constexpr int kChannels = 3;

  /// All-black image of the given size.
  Image(int width, int height);
  /// Adopts `pixels`; throws InvalidImage unless it holds width*height*3 bytes.
  Image(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size_bytes() const noexcept { return pixels_.size(); }

  std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }
  std::span<std::uint8_t> bytes() noexcept { return pixels_; }

  const std::uint8_t* pixel(int x, int y) const noexcept {
    return pixels_.data() + (static_cast<std::size_t>(y) * width_ + x) * kChannels;
  }
  std::uint8_t* pixel(int x, int y) noexcept {
    return pixels_.data() + (static_cast<std::size_t>(y) * width_ + x) * kChannels;
  }
  const std::uint8_t* row(int y) const noexcept { return pixel(0, y); }
  std::uint8_t* row(int y) noexcept { return pixel(0, y); }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Integer degrees, counter-clockwise positive, always normalized to [0, 360).
class AngleDeg {
 public:
  constexpr AngleDeg() = default;
  constexpr explicit AngleDeg(long long degrees) : value_(static_cast<int>(((degrees % 360) + 360) % 360)) {}

  constexpr int value() const noexcept { return value_; }
  constexpr bool is_right_angle() const noexcept { return value_ % 90 == 0; }

  /// The rotation that undoes this one.
  constexpr AngleDeg inverse() const noexcept { return AngleDeg(360 - value_); }

  friend constexpr AngleDeg operator+(AngleDeg a, AngleDeg b) noexcept { return AngleDeg(a.value_ + b.value_); }
  friend constexpr AngleDeg operator-(AngleDeg a, AngleDeg b) noexcept { return AngleDeg(a.value_ - b.value_); }
  friend constexpr auto operator<=>(AngleDeg, AngleDeg) = default;

 private:
  int value_ = 0;
};

}  // namespace rotguard
