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


#include "rotguard/image.hpp"

#include <string>

#include "rotguard/errors.hpp"

namespace rotguard {

namespace {

std::size_t checked_size(int width, int height) {
  if (width < 1 || height < 1) {
    throw InvalidImage("image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                       std::to_string(height));
  }
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * Image::kChannels;
}

}  // namespace

Image::Image(int width, int height)
    : width_(width), height_(height), pixels_(checked_size(width, height), 0) {}

Image::Image(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  const std::size_t expected = checked_size(width, height);
  if (pixels_.size() != expected) {
    throw InvalidImage("pixel buffer holds " + std::to_string(pixels_.size()) + " bytes, expected " +
                       std::to_string(expected));
  }
}

}  // namespace rotguard
