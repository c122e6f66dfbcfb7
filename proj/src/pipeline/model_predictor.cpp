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


#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>

#include <fstream>
#include <mutex>

#include "rotguard/errors.hpp"
#include "rotguard/predictor.hpp"

namespace rotguard::pipeline {

namespace {

std::array<float, 3> read_triplet(const nlohmann::json& doc, const char* key, std::array<float, 3> fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw ModelLoadError(std::string("sidecar field '") + key + "' must be an array of 3 numbers");
  }
  return {v[0].get<float>(), v[1].get<float>(), v[2].get<float>()};
}

}  // namespace

ModelSidecar ModelSidecar::from_json(const nlohmann::json& doc) {
  ModelSidecar s;
  try {
    if (doc.contains("layout")) {
      const auto layout = doc.at("layout").get<std::string>();
      if (layout == "NCHW") {
        s.layout = Layout::NCHW;
      } else if (layout == "NHWC") {
        s.layout = Layout::NHWC;
      } else {
        throw ModelLoadError("sidecar layout must be NCHW or NHWC, got " + layout);
      }
    }
    if (doc.contains("channel_order")) {
      const auto order = doc.at("channel_order").get<std::string>();
      if (order != "RGB" && order != "BGR") throw ModelLoadError("sidecar channel_order must be RGB or BGR");
      s.bgr = order == "BGR";
    }
    s.mean = read_triplet(doc, "mean", s.mean);
    s.scale = read_triplet(doc, "scale", s.scale);
    s.invert_prediction = doc.value("invert_prediction", false);
    s.input_width = doc.value("input_width", 224);
    s.input_height = doc.value("input_height", 224);
  } catch (const nlohmann::json::exception& e) {
    throw ModelLoadError(std::string("malformed model sidecar: ") + e.what());
  }
  if (s.input_width < 1 || s.input_height < 1) {
    throw ModelLoadError("sidecar input dimensions must be >= 1");
  }
  return s;
}

ModelSidecar ModelSidecar::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelLoadError("cannot open model sidecar " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ModelLoadError("model sidecar " + path.string() + " is not valid JSON: " + e.what());
  }
}

nlohmann::json ModelSidecar::to_json() const {
  return {{"layout", layout == Layout::NCHW ? "NCHW" : "NHWC"},
          {"channel_order", bgr ? "BGR" : "RGB"},
          {"mean", mean},
          {"scale", scale},
          {"invert_prediction", invert_prediction},
          {"input_width", input_width},
          {"input_height", input_height}};
}

std::filesystem::path default_sidecar_path(const std::filesystem::path& model_file) {
  return model_file.string() + ".json";
}

struct ModelPredictor::Impl {
  mutable std::mutex mu;  // cv::dnn::Net::forward is not reentrant
  mutable cv::dnn::Net net;
};

namespace {

ModelSidecar sidecar_for(const std::filesystem::path& model_file) {
  const auto path = default_sidecar_path(model_file);
  return std::filesystem::exists(path) ? ModelSidecar::load(path) : ModelSidecar{};
}

}  // namespace

ModelPredictor::ModelPredictor(const std::filesystem::path& model_file)
    : ModelPredictor(model_file, sidecar_for(model_file)) {}

ModelPredictor::ModelPredictor(const std::filesystem::path& model_file, ModelSidecar sidecar)
    : sidecar_(std::move(sidecar)), impl_(std::make_unique<Impl>()) {
  if (!std::filesystem::exists(model_file)) {
    throw ModelLoadError("model file not found: " + model_file.string());
  }
  try {
    impl_->net = cv::dnn::readNetFromONNX(model_file.string());
  } catch (const cv::Exception& e) {
    throw ModelLoadError("cannot load model " + model_file.string() + ": " + e.what());
  }
  if (impl_->net.empty()) {
    throw ModelLoadError("model " + model_file.string() + " has no layers");
  }

  // Dry run so that a wrong output length fails here, not mid-sweep.
  std::vector<float> probe;
  try {
    probe = logits(Image(sidecar_.input_width, sidecar_.input_height));
  } catch (const ShapeError&) {
    throw;
  } catch (const cv::Exception& e) {
    throw ModelLoadError("model " + model_file.string() + " failed its dry run: " + e.what());
  }
}

ModelPredictor::~ModelPredictor() = default;

geometry::Size ModelPredictor::input_size() const { return {sidecar_.input_width, sidecar_.input_height}; }

std::vector<float> ModelPredictor::logits(const Image& model_input) const {
  const int w = sidecar_.input_width;
  const int h = sidecar_.input_height;
  if (model_input.width() != w || model_input.height() != h) {
    throw ShapeError("model input must be " + std::to_string(w) + "x" + std::to_string(h));
  }

  const bool nchw = sidecar_.layout == ModelSidecar::Layout::NCHW;
  const int dims_nchw[] = {1, 3, h, w};
  const int dims_nhwc[] = {1, h, w, 3};
  cv::Mat blob(4, nchw ? dims_nchw : dims_nhwc, CV_32F);
  float* out = blob.ptr<float>();
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* px = model_input.row(y);
    for (int x = 0; x < w; ++x, px += 3) {
      for (int c = 0; c < 3; ++c) {
        const int src_c = sidecar_.bgr ? 2 - c : c;
        const float v = (static_cast<float>(px[src_c]) - sidecar_.mean[c]) * sidecar_.scale[c];
        const std::size_t idx = static_cast<std::size_t>(y) * w + x;
        if (nchw) {
          out[c * plane + idx] = v;
        } else {
          out[idx * 3 + c] = v;
        }
      }
    }
  }

  cv::Mat result;
  {
    std::lock_guard lock(impl_->mu);
    impl_->net.setInput(blob);
    result = impl_->net.forward().clone();
  }
  if (result.total() != static_cast<std::size_t>(kNumAngleClasses)) {
    throw ShapeError("model output has " + std::to_string(result.total()) + " entries, expected " +
                     std::to_string(kNumAngleClasses));
  }
  const float* r = result.ptr<float>();
  return std::vector<float>(r, r + kNumAngleClasses);
}

AngleDeg ModelPredictor::predict(const Image& model_input, const PredictContext&) const {
  const std::vector<float> out = logits(model_input);
  int best = 0;
  for (int i = 1; i < kNumAngleClasses; ++i) {
    if (out[i] > out[best]) best = i;
  }
  const AngleDeg cls(best);
  return sidecar_.invert_prediction ? cls.inverse() : cls;
}

}  // namespace rotguard::pipeline
