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


#include "rotguard/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "rotguard/errors.hpp"

namespace rotguard::io {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Any decoded Mat (1/3/4 channels, 8/16 bit) -> RGB8 Image.
Image from_mat(const cv::Mat& decoded, const std::string& what) {
  if (decoded.empty()) {
    throw ImageIoError("cannot decode image: " + what);
  }
  cv::Mat m = decoded;
  if (m.depth() == CV_16U) {
    m.convertTo(m, CV_8U, 1.0 / 257.0);
  } else if (m.depth() != CV_8U) {
    m.convertTo(m, CV_8U);
  }

  Image out(m.cols, m.rows);
  const int ch = m.channels();
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* src = m.ptr<std::uint8_t>(y);
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < m.cols; ++x, src += ch, dst += 3) {
      switch (ch) {
        case 1:
          dst[0] = dst[1] = dst[2] = src[0];
          break;
        case 3:  // BGR
          dst[0] = src[2];
          dst[1] = src[1];
          dst[2] = src[0];
          break;
        case 4: {  // BGRA, flatten against black
          const unsigned a = src[3];
          dst[0] = static_cast<std::uint8_t>((src[2] * a + 127) / 255);
          dst[1] = static_cast<std::uint8_t>((src[1] * a + 127) / 255);
          dst[2] = static_cast<std::uint8_t>((src[0] * a + 127) / 255);
          break;
        }
        default:
          throw ImageIoError("unsupported channel count " + std::to_string(ch) + ": " + what);
      }
    }
  }
  return out;
}

cv::Mat to_bgr_mat(const Image& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    const std::uint8_t* src = img.row(y);
    std::uint8_t* dst = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x, src += 3, dst += 3) {
      dst[0] = src[2];
      dst[1] = src[1];
      dst[2] = src[0];
    }
  }
  return m;
}

}  // namespace

bool is_supported_image(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ImageIoError("cannot open image: " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.empty()) {
    throw ImageIoError("empty image file: " + path.string());
  }
  return from_mat(cv::imdecode(bytes, cv::IMREAD_UNCHANGED), path.string());
}

Image decode_image(std::span<const std::uint8_t> encoded) {
  if (encoded.empty()) {
    throw ImageIoError("cannot decode empty buffer");
  }
  const cv::Mat buf(1, static_cast<int>(encoded.size()), CV_8U, const_cast<std::uint8_t*>(encoded.data()));
  return from_mat(cv::imdecode(buf, cv::IMREAD_UNCHANGED), "<memory>");
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", to_bgr_mat(img), out)) {
    throw ImageIoError("PNG encoding failed");
  }
  return out;
}

void write_image(const std::filesystem::path& path, const Image& img) {
  const std::string ext = lower_ext(path);
  std::vector<std::uint8_t> bytes;
  if (ext == ".png") {
    bytes = encode_png(img);
  } else if (ext == ".jpg" || ext == ".jpeg") {
    if (!cv::imencode(".jpg", to_bgr_mat(img), bytes, {cv::IMWRITE_JPEG_QUALITY, 95})) {
      throw ImageIoError("JPEG encoding failed: " + path.string());
    }
  } else {
    throw ImageIoError("unsupported output format '" + ext + "': " + path.string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ImageIoError("cannot write image: " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw ImageIoError("short write: " + path.string());
  }
}

}  // namespace rotguard::io
