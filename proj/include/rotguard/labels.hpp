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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace rotguard {

struct Label {
  std::string text;
  double confidence;  // canonical scale, (0, 1]

  friend bool operator==(const Label&, const Label&) = default;
};

/// Labels returned by a labeling backend: normalized text, unique, each
/// confidence in (0, 1], ordered by descending confidence.
class LabelSet {
 public:
  LabelSet() = default;

  /// Takes already-canonical entries. Throws InvalidLabelSet on duplicate or
  /// unnormalized text and InvalidScore on a confidence outside (0, 1].
  /// Entries are re-sorted by descending confidence (ties by text).
  explicit LabelSet(std::vector<Label> entries);

  const std::vector<Label>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  std::optional<double> confidence_of(std::string_view normalized_text) const noexcept;

  /// The first `n` entries.
  LabelSet truncated(std::size_t n) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<Label> entries_;
};

/// Case-folds (ASCII) and trims surrounding whitespace.
std::string normalize_label_text(std::string_view text);

/// Builds a LabelSet from raw backend output. Scores may be on a (0, 1] or a
/// (0, 100] scale; the set is treated as percentages when its maximum score
/// exceeds 1. Duplicate labels keep their highest score. Throws InvalidScore
/// for any score <= 0, > 100 or non-finite, and InvalidLabelSet for empty text.
LabelSet normalize_labels(const std::vector<std::pair<std::string, double>>& raw);

/// `{"labels":[{"description": ..., "score": ...}, ...]}`
nlohmann::json to_json(const LabelSet& labels);
/// Inverse of to_json; also accepts percentage scores. Throws
/// InvalidLabelSet when the document does not follow the schema.
LabelSet label_set_from_json(const nlohmann::json& doc);

/// Canonical text form: to_json(...).dump(2). Byte-stable for equal sets.
std::string dump_label_set(const LabelSet& labels);

}  // namespace rotguard
