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


#include "rotguard/labels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "rotguard/errors.hpp"

namespace rotguard {

namespace {

bool descending(const Label& a, const Label& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  return a.text < b.text;
}

}  // namespace

std::string normalize_label_text(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t first = 0;
  std::size_t last = text.size();
  while (first < last && is_space(static_cast<unsigned char>(text[first]))) ++first;
  while (last > first && is_space(static_cast<unsigned char>(text[last - 1]))) --last;
  std::string out(text.substr(first, last - first));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

LabelSet::LabelSet(std::vector<Label> entries) : entries_(std::move(entries)) {
  for (const Label& l : entries_) {
    if (!(l.confidence > 0.0 && l.confidence <= 1.0)) {
      throw InvalidScore("confidence for '" + l.text + "' must be in (0, 1], got " + std::to_string(l.confidence));
    }
    if (l.text.empty() || normalize_label_text(l.text) != l.text) {
      throw InvalidLabelSet("label text is empty or not normalized: '" + l.text + "'");
    }
  }
  std::sort(entries_.begin(), entries_.end(), descending);
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    // Sorted by confidence, so duplicates need a full scan.
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[i].text == entries_[j].text) {
        throw InvalidLabelSet("duplicate label '" + entries_[i].text + "'");
      }
    }
  }
}

std::optional<double> LabelSet::confidence_of(std::string_view normalized_text) const noexcept {
  for (const Label& l : entries_) {
    if (l.text == normalized_text) return l.confidence;
  }
  return std::nullopt;
}

LabelSet LabelSet::truncated(std::size_t n) const {
  LabelSet out;
  out.entries_.assign(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(std::min(n, entries_.size())));
  return out;
}

LabelSet normalize_labels(const std::vector<std::pair<std::string, double>>& raw) {
  double max_score = 0.0;
  for (const auto& [text, score] : raw) {
    if (!std::isfinite(score) || score <= 0.0 || score > 100.0) {
      throw InvalidScore("score for '" + text + "' must be in (0, 100], got " + std::to_string(score));
    }
    max_score = std::max(max_score, score);
  }
  const double scale = max_score > 1.0 ? 0.01 : 1.0;

  std::vector<Label> merged;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& [text, score] : raw) {
    std::string key = normalize_label_text(text);
    if (key.empty()) {
      throw InvalidLabelSet("label text is empty");
    }
    const double conf = std::min(scale == 1.0 ? score : score / 100.0, 1.0);
    auto [it, inserted] = index.emplace(key, merged.size());
    if (inserted) {
      merged.push_back({std::move(key), conf});
    } else {
      merged[it->second].confidence = std::max(merged[it->second].confidence, conf);
    }
  }
  return LabelSet(std::move(merged));
}

nlohmann::json to_json(const LabelSet& labels) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Label& l : labels) {
    arr.push_back({{"description", l.text}, {"score", l.confidence}});
  }
  return nlohmann::json{{"labels", std::move(arr)}};
}

LabelSet label_set_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("labels") || !doc.at("labels").is_array()) {
    throw InvalidLabelSet("expected an object with a \"labels\" array");
  }
  std::vector<std::pair<std::string, double>> raw;
  for (const auto& entry : doc.at("labels")) {
    if (!entry.is_object() || !entry.contains("description") || !entry.at("description").is_string() ||
        !entry.contains("score") || !entry.at("score").is_number()) {
      throw InvalidLabelSet("each label needs a string \"description\" and a numeric \"score\"");
    }
    raw.emplace_back(entry.at("description").get<std::string>(), entry.at("score").get<double>());
  }
  return normalize_labels(raw);
}

std::string dump_label_set(const LabelSet& labels) { return to_json(labels).dump(2); }

}  // namespace rotguard
