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


#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include <json.hpp>

#include "rotguard/errors.hpp"
#include "rotguard/sweep.hpp"

namespace rotguard::sweep {
namespace {

// Shortest text that round-trips; keeps CSV and JSONL readers lossless.
std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw ConfigError("cannot format number");
  return std::string(buf, end);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// RFC 4180-ish: quoted fields may hold commas, doubled quotes and newlines.
bool read_csv_row(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return false;
  if (quoted) throw ConfigError("unterminated quoted CSV field");
  fields.push_back(std::move(field));
  return true;
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError(std::string("bad ") + what + " value '" + s + "'");
  }
  return v;
}

template <typename T>
std::optional<T> parse_optional(const std::string& s, const char* what) {
  if (s.empty()) return std::nullopt;
  return parse_number<T>(s, what);
}

template <typename T>
std::string optional_text(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) return format_double(*v);
  else return std::to_string(*v);
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kRecordsCsvHeader << '\n';
  for (const SweepRecord& r : records) {
    out << csv_field(r.image_id) << ',' << r.applied_angle.value() << ',' << to_string(r.condition) << ','
        << optional_text(r.percentage_error) << ','
        << (r.predicted_total ? std::to_string(r.predicted_total->value()) : "") << ','
        << optional_text(r.residual) << ',' << csv_field(r.error) << '\n';
  }
}

void write_records_jsonl(std::ostream& out, const std::vector<SweepRecord>& records) {
  for (const SweepRecord& r : records) {
    nlohmann::json j{{"image_id", r.image_id},
                     {"applied_angle", r.applied_angle.value()},
                     {"condition", to_string(r.condition)}};
    j["percentage_error"] = r.percentage_error ? nlohmann::json(*r.percentage_error) : nlohmann::json();
    j["predicted_total"] = r.predicted_total ? nlohmann::json(r.predicted_total->value()) : nlohmann::json();
    j["residual"] = r.residual ? nlohmann::json(*r.residual) : nlohmann::json();
    j["error"] = r.error.empty() ? nlohmann::json() : nlohmann::json(r.error);
    out << j.dump() << '\n';
  }
}

void write_aggregates_csv(std::ostream& out, const std::vector<AngleAggregate>& aggregates) {
  out << kAggregateCsvHeader << '\n';
  for (const AngleAggregate& a : aggregates) {
    out << a.angle.value() << ',' << optional_text(a.mean_pe_rotated) << ',' << optional_text(a.mean_pe_corrected)
        << ',' << optional_text(a.mean_residual) << ',' << a.n << '\n';
  }
}

std::vector<SweepRecord> read_records_csv(std::istream& in) {
  std::vector<std::string> fields;
  if (!read_csv_row(in, fields)) throw ConfigError("records CSV is empty");
  std::string header;
  for (std::size_t i = 0; i < fields.size(); ++i) header += (i ? "," : "") + fields[i];
  if (header != kRecordsCsvHeader) throw ConfigError("unexpected records CSV header: " + header);

  std::vector<SweepRecord> out;
  long line = 1;
  while (read_csv_row(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 7) {
      throw ConfigError("records CSV line " + std::to_string(line) + ": expected 7 fields, got " +
                        std::to_string(fields.size()));
    }
    SweepRecord r;
    r.image_id = fields[0];
    r.applied_angle = AngleDeg(parse_number<int>(fields[1], "applied_angle"));
    r.condition = parse_condition(fields[2]);
    r.percentage_error = parse_optional<double>(fields[3], "percentage_error");
    if (auto p = parse_optional<int>(fields[4], "predicted_total")) r.predicted_total = AngleDeg(*p);
    r.residual = parse_optional<int>(fields[5], "residual");
    r.error = fields[6];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SweepRecord> read_records_jsonl(std::istream& in) {
  std::vector<SweepRecord> out;
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(text);
      SweepRecord r;
      r.image_id = j.at("image_id").get<std::string>();
      r.applied_angle = AngleDeg(j.at("applied_angle").get<int>());
      r.condition = parse_condition(j.at("condition").get<std::string>());
      if (j.contains("percentage_error") && !j["percentage_error"].is_null())
        r.percentage_error = j["percentage_error"].get<double>();
      if (j.contains("predicted_total") && !j["predicted_total"].is_null())
        r.predicted_total = AngleDeg(j["predicted_total"].get<int>());
      if (j.contains("residual") && !j["residual"].is_null()) r.residual = j["residual"].get<int>();
      if (j.contains("error") && !j["error"].is_null()) r.error = j["error"].get<std::string>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("records JSONL line " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace rotguard::sweep
