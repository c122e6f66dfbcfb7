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


#include <cmath>
#include <mutex>
#include <random>

#include "rotguard/digest.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/predictor.hpp"

namespace rotguard::pipeline {

AngleDeg predict_angle(const AnglePredictor& predictor, const Image& img, const PredictContext& ctx) {
  const geometry::Size in = predictor.input_size();
  if (img.width() == in.width && img.height() == in.height) {
    return predictor.predict(img, ctx);
  }
  return predictor.predict(geometry::resize(img, in.width, in.height), ctx);
}

OraclePredictor::OraclePredictor(OracleErrorMode mode, std::uint64_t seed, geometry::Size input)
    : mode_(mode), seed_(seed), input_(input) {
  if (mode_.probability < 0.0 || mode_.probability > 1.0 || mode_.sigma < 0.0) {
    throw ConfigError("oracle error mode parameters out of range");
  }
}

void OraclePredictor::record(const std::string& subject_id, AngleDeg applied_rotation) {
  std::unique_lock lock(mu_);
  truth_[subject_id] = applied_rotation;
}

AngleDeg OraclePredictor::predict(const Image&, const PredictContext& ctx) const {
  AngleDeg applied;
  {
    std::shared_lock lock(mu_);
    auto it = truth_.find(ctx.subject_id);
    if (it == truth_.end()) {
      throw OracleMiss("oracle has no ground truth for subject '" + ctx.subject_id + "'");
    }
    applied = it->second;
  }
  const AngleDeg truth = applied - ctx.prior_correction;

  const bool active = mode_.kind != OracleErrorKind::None && (mode_.only_pass == 0 || mode_.only_pass == ctx.pass);
  if (!active) {
    return truth;
  }
  std::mt19937_64 rng(stable_hash(ctx.subject_id + "#" + std::to_string(ctx.pass), seed_));
  switch (mode_.kind) {
    case OracleErrorKind::Flip180:
      if (std::bernoulli_distribution(mode_.probability)(rng)) return truth + AngleDeg(180);
      return truth;
    case OracleErrorKind::GaussianJitter: {
      const double noise = std::normal_distribution<double>(0.0, mode_.sigma)(rng);
      return truth + AngleDeg(std::llround(noise));
    }
    case OracleErrorKind::None:
      break;
  }
  return truth;
}

}  // namespace rotguard::pipeline
