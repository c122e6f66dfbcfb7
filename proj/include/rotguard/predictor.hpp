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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotguard/geometry.hpp"
#include "rotguard/image.hpp"

namespace rotguard::pipeline {

inline constexpr int kNumAngleClasses = 360;

/// What the pipeline knows about the image being predicted. Model-backed
/// predictors ignore it; the oracle uses it to look up ground truth.
struct PredictContext {
  std::string subject_id;
  int pass = 1;
  /// Sum of the predictions already acted on for this subject.
  AngleDeg prior_correction{0};
};

/// Maps an image to the counter-clockwise rotation that was applied to the
/// upright original, as one of 360 integer classes. Correcting means rotating
/// by the inverse. Implementations are immutable after construction and safe
/// for concurrent calls.
class AnglePredictor {
 public:
  virtual ~AnglePredictor() = default;
  virtual geometry::Size input_size() const = 0;
  /// `model_input` already has input_size().
  virtual AngleDeg predict(const Image& model_input, const PredictContext& ctx) const = 0;
};

/// Resizes a copy of `img` to the predictor's input size and predicts.
AngleDeg predict_angle(const AnglePredictor& predictor, const Image& img, const PredictContext& ctx = {});

enum class OracleErrorKind { None, Flip180, GaussianJitter };

struct OracleErrorMode {
  OracleErrorKind kind = OracleErrorKind::None;
  double probability = 1.0;  // Flip180
  double sigma = 0.0;        // GaussianJitter, degrees
  int only_pass = 0;         // 0: every pass; otherwise just that pass
};

/// Test double that answers from recorded ground truth. For a subject with
/// applied rotation t it reports t - prior_correction, optionally perturbed.
/// Perturbations are seeded per (subject, pass), so results do not depend on
/// call order or thread count.
class OraclePredictor final : public AnglePredictor {
 public:
  explicit OraclePredictor(OracleErrorMode mode = {}, std::uint64_t seed = 0,
                           geometry::Size input = {224, 224});

  void record(const std::string& subject_id, AngleDeg applied_rotation);
  geometry::Size input_size() const override { return input_; }
  /// Throws OracleMiss for an unrecorded subject.
  AngleDeg predict(const Image& model_input, const PredictContext& ctx) const override;

 private:
  OracleErrorMode mode_;
  std::uint64_t seed_;
  geometry::Size input_;
  mutable std::shared_mutex mu_;
  std::map<std::string, AngleDeg> truth_;
};

/// Preprocessing that travels next to a model file as `<model>.json`.
struct ModelSidecar {
  enum class Layout { NCHW, NHWC };
  Layout layout = Layout::NCHW;
  bool bgr = false;
  std::array<float, 3> mean{0.f, 0.f, 0.f};  // subtracted from 0..255 values
  std::array<float, 3> scale{1.f / 255.f, 1.f / 255.f, 1.f / 255.f};
  bool invert_prediction = false;  // model emits the correcting rotation
  int input_width = 224;
  int input_height = 224;

  static ModelSidecar from_json(const nlohmann::json& doc);
  static ModelSidecar load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

std::filesystem::path default_sidecar_path(const std::filesystem::path& model_file);

/// 360-class ONNX classifier run through OpenCV's DNN module. The output
/// length is checked at load time with a dry run on a zero tensor.
class ModelPredictor final : public AnglePredictor {
 public:
  /// Uses default_sidecar_path(model_file) when it exists, defaults otherwise.
  explicit ModelPredictor(const std::filesystem::path& model_file);
  ModelPredictor(const std::filesystem::path& model_file, ModelSidecar sidecar);
  ~ModelPredictor() override;

  geometry::Size input_size() const override;
  AngleDeg predict(const Image& model_input, const PredictContext& ctx) const override;

  /// Raw output vector (length 360) for an input of input_size().
  std::vector<float> logits(const Image& model_input) const;
  const ModelSidecar& sidecar() const noexcept { return sidecar_; }

 private:
  struct Impl;
  ModelSidecar sidecar_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rotguard::pipeline
