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


#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "rotguard/digest.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/geometry.hpp"
#include "rotguard/providers.hpp"

namespace rotguard::providers {

namespace {

// Street-scene vocabulary for derived profiles.
constexpr std::array<const char*, 40> kVocabulary = {
    "road",         "street",        "building",    "sky",          "car",          "tree",
    "infrastructure", "urban area",  "architecture", "neighbourhood", "asphalt",    "lane",
    "sidewalk",     "vehicle",       "town",        "city",         "residential area", "plant",
    "cloud",        "window",        "facade",      "road surface", "thoroughfare", "intersection",
    "traffic light", "street light", "pedestrian",  "metropolitan area", "house",    "wheel",
    "tire",         "motor vehicle", "landmark",    "tower block",  "public space", "mixed-use",
    "alley",        "crosswalk",     "signage",     "pole"};

}  // namespace

double DegradationProfile::decay(std::size_t label_index, int circular_distance) const {
  const double d = std::clamp(circular_distance, 0, 180) / 180.0;
  return 1.0 - (1.0 - floors.at(label_index)) * d;
}

void DegradationProfile::validate() const {
  if (floors.size() != base_labels.size()) {
    throw InvalidLabelSet("degradation profile needs one floor per base label");
  }
  for (std::size_t i = 0; i < floors.size(); ++i) {
    if (!(floors[i] >= 0.0 && floors[i] <= 1.0)) {
      throw InvalidLabelSet("decay floor must be in [0, 1]");
    }
    if (base_labels.entries()[i].confidence < drop_threshold) {
      throw InvalidLabelSet("base label '" + base_labels.entries()[i].text + "' is below the drop threshold");
    }
  }
}

LabelSet synthetic_label(const DegradationProfile& profile, AngleDeg rotation) {
  const int d = geometry::circular_diff(rotation, AngleDeg(0));
  std::vector<Label> kept;
  for (std::size_t i = 0; i < profile.base_labels.size(); ++i) {
    const Label& base = profile.base_labels.entries()[i];
    const double conf = base.confidence * profile.decay(i, d);
    if (conf < profile.drop_threshold) continue;
    kept.push_back({base.text, conf});
  }
  return LabelSet(std::move(kept));
}

SyntheticProvider::SyntheticProvider(std::uint64_t seed, SyntheticOptions options)
    : seed_(seed), options_(options) {
  if (options_.min_labels < 1 || options_.max_labels < options_.min_labels ||
      options_.max_labels > static_cast<int>(kVocabulary.size())) {
    throw ConfigError("synthetic label count range is invalid");
  }
  if (!(options_.drop_threshold > 0.0 && options_.drop_threshold < 0.98)) {
    throw ConfigError("synthetic drop threshold must be in (0, 0.98)");
  }
}

std::string SyntheticProvider::id() const {
  std::ostringstream os;
  os << "synthetic/" << seed_ << "/" << options_.floor << "/" << options_.floor_jitter << "/"
     << options_.drop_threshold << "/" << options_.min_labels << "-" << options_.max_labels;
  return os.str();
}

void SyntheticProvider::set_profile(const std::string& image_id, DegradationProfile profile) {
  profile.validate();
  std::lock_guard lock(mu_);
  explicit_[image_id] = std::move(profile);
}

DegradationProfile SyntheticProvider::profile_for(const std::string& image_id) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = explicit_.find(image_id); it != explicit_.end()) return it->second;
  }

  std::mt19937_64 rng(stable_hash(image_id, seed_));
  std::vector<std::size_t> order(kVocabulary.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  const int n = std::uniform_int_distribution<int>(options_.min_labels, options_.max_labels)(rng);
  std::uniform_real_distribution<double> conf_dist(std::max(options_.drop_threshold, 0.55), 0.98);
  std::uniform_real_distribution<double> jitter(-options_.floor_jitter, options_.floor_jitter);

  std::vector<Label> labels;
  for (int i = 0; i < n; ++i) {
    // Four decimals keeps fixtures readable.
    const double conf = std::round(conf_dist(rng) * 1e4) / 1e4;
    labels.push_back({kVocabulary[order[static_cast<std::size_t>(i)]], conf});
  }
  DegradationProfile profile;
  profile.base_labels = LabelSet(std::move(labels));
  profile.drop_threshold = options_.drop_threshold;
  // Floors are drawn after sorting so they line up with base_labels order.
  for (std::size_t i = 0; i < profile.base_labels.size(); ++i) {
    profile.floors.push_back(std::clamp(options_.floor + jitter(rng), 0.0, 1.0));
  }
  profile.validate();
  return profile;
}

LabelSet SyntheticProvider::label(const LabelRequest& req) {
  if (!req.subject) {
    throw ProviderError("synthetic provider needs a subject hint (image id and true rotation)");
  }
  return synthetic_label(profile_for(req.subject->image_id), req.subject->true_rotation)
      .truncated(static_cast<std::size_t>(req.max_results));
}

}  // namespace rotguard::providers
