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


#include "rotguard/pipeline.hpp"

#include <string>

#include "rotguard/errors.hpp"

namespace rotguard::pipeline {

CorrectionStep correct_once(const AnglePredictor& predictor, const Image& img, const PredictContext& ctx,
                            const PipelineOptions& options) {
  if (img.width() < options.min_side || img.height() < options.min_side) {
    throw DegenerateImage("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                          " is below the " + std::to_string(options.min_side) + "px minimum for prediction");
  }
  const AngleDeg predicted = predict_angle(predictor, img, ctx);
  Image rotated = geometry::rotate_with_pad(img, predicted.inverse());
  return {geometry::trim_black_padding(rotated, options.black_threshold), predicted};
}

CorrectionResult correct_double_pass(const AnglePredictor& predictor, const Image& img, const std::string& subject_id,
                                     const PipelineOptions& options) {
  PredictContext ctx{subject_id, 1, AngleDeg(0)};
  CorrectionStep first = correct_once(predictor, img, ctx, options);

  ctx.pass = 2;
  ctx.prior_correction = first.prediction;
  CorrectionStep second = correct_once(predictor, first.corrected, ctx, options);

  return {std::move(second.corrected), first.prediction, second.prediction, first.prediction + second.prediction};
}

}  // namespace rotguard::pipeline
