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
#include <string>

#include "rotguard/geometry.hpp"
#include "rotguard/image.hpp"
#include "rotguard/predictor.hpp"

namespace rotguard::pipeline {

struct PipelineOptions {
  std::uint8_t black_threshold = geometry::kDefaultBlackThreshold;
  int min_side = 8;  // smaller inputs are rejected with DegenerateImage
};

struct CorrectionStep {
  Image corrected;
  AngleDeg prediction;
};

/// One predict-and-correct step: predicts on a resized copy, rotates the
/// full-resolution input by the inverse of the prediction, trims padding.
CorrectionStep correct_once(const AnglePredictor& predictor, const Image& img, const PredictContext& ctx = {},
                            const PipelineOptions& options = {});

struct CorrectionResult {
  Image corrected;
  AngleDeg pass1_prediction;
  AngleDeg pass2_prediction;
  AngleDeg total_correction;  // (pass1 + pass2) mod 360
};

/// Runs correct_once twice, feeding the first output back in. The second pass
/// catches first-pass predictions that land 180 degrees off. Always exactly
/// two passes.
CorrectionResult correct_double_pass(const AnglePredictor& predictor, const Image& img,
                                     const std::string& subject_id = {}, const PipelineOptions& options = {});

}  // namespace rotguard::pipeline
