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

#include <string>
#include <vector>

#include <json.hpp>

#include "rotguard/labels.hpp"

namespace rotguard {

struct LabelWeight {
  std::string label;
  double weight;
};

/// Each baseline label's share of 100, proportional to its confidence.
/// Throws EmptyBaseline when `baseline` is empty.
std::vector<LabelWeight> weights(const LabelSet& baseline);

struct LabelContribution {
  std::string label;
  double weight;
  double similarity_value;  // 0 <= similarity_value <= weight
  bool present_in_test;
};

struct SimilarityReport {
  double similarity_index;   // [0, 100]
  double percentage_error;   // 100 - similarity_index
  std::vector<LabelContribution> per_label;  // baseline order
};

/// Confidence-weighted overlap of `test` against `baseline`.
///
/// A baseline label x with weight w(x) that also appears in `test` scores
/// w(x) * conf_test(x) / conf_base(x) when the test confidence is lower, and
/// w(x) otherwise; labels only in `test` score nothing. The index is the sum
/// of those scores, and the percentage error is 100 minus the index.
/// Matching is exact on normalized text. Throws EmptyBaseline.
SimilarityReport similarity_index(const LabelSet& baseline, const LabelSet& test);

/// Full-precision JSON; `display_decimals` >= 0 additionally adds rounded
/// copies of the headline numbers under "display".
nlohmann::json to_json(const SimilarityReport& report, int display_decimals = 2);

}  // namespace rotguard
