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


#include "rotguard/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "rotguard/errors.hpp"

namespace rotguard {

std::vector<LabelWeight> weights(const LabelSet& baseline) {
  if (baseline.empty()) {
    throw EmptyBaseline("baseline label set is empty; weights are undefined");
  }
  double total = 0.0;
  for (const Label& l : baseline) total += l.confidence;

  std::vector<LabelWeight> out;
  out.reserve(baseline.size());
  for (const Label& l : baseline) {
    out.push_back({l.text, l.confidence / total * 100.0});
  }
  return out;
}

SimilarityReport similarity_index(const LabelSet& baseline, const LabelSet& test) {
  const std::vector<LabelWeight> w = weights(baseline);

  SimilarityReport report{0.0, 100.0, {}};
  report.per_label.reserve(w.size());
  double index = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double base_conf = baseline.entries()[i].confidence;
    const std::optional<double> test_conf = test.confidence_of(w[i].label);

    double value = 0.0;
    if (test_conf) {
      // Over-confident matches are capped at the label's weight.
      value = *test_conf < base_conf ? w[i].weight * (*test_conf / base_conf) : w[i].weight;
    }
    index += value;
    report.per_label.push_back({w[i].label, w[i].weight, value, test_conf.has_value()});
  }

  report.similarity_index = std::clamp(index, 0.0, 100.0);
  report.percentage_error = 100.0 - report.similarity_index;
  return report;
}

nlohmann::json to_json(const SimilarityReport& report, int display_decimals) {
  nlohmann::json per_label = nlohmann::json::array();
  for (const auto& c : report.per_label) {
    per_label.push_back({{"label", c.label},
                         {"weight", c.weight},
                         {"similarity_value", c.similarity_value},
                         {"present_in_test", c.present_in_test}});
  }
  nlohmann::json doc{{"similarity_index", report.similarity_index},
                     {"percentage_error", report.percentage_error},
                     {"per_label", std::move(per_label)}};
  if (display_decimals >= 0) {
    const double scale = std::pow(10.0, display_decimals);
    auto round = [scale](double v) { return std::round(v * scale) / scale; };
    doc["display"] = {{"similarity_index", round(report.similarity_index)},
                      {"percentage_error", round(report.percentage_error)}};
  }
  return doc;
}

}  // namespace rotguard
