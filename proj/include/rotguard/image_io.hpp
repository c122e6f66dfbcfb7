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
#include <filesystem>
#include <span>
#include <vector>

#include "rotguard/image.hpp"

namespace rotguard::io {

/// Decodes PNG or JPEG. Grey is expanded to RGB, 16-bit is scaled to 8-bit,
/// and alpha is flattened against black. Throws ImageIoError.
Image read_image(const std::filesystem::path& path);
Image decode_image(std::span<const std::uint8_t> encoded);

/// Format follows the extension (.png, .jpg/.jpeg). Throws ImageIoError.
void write_image(const std::filesystem::path& path, const Image& img);

/// Deterministic PNG encoding; these bytes are what goes on the wire and
/// what the label cache digests.
std::vector<std::uint8_t> encode_png(const Image& img);

bool is_supported_image(const std::filesystem::path& path);

}  // namespace rotguard::io
