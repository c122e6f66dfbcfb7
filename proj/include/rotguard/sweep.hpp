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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotguard/image.hpp"
#include "rotguard/pipeline.hpp"
#include "rotguard/predictor.hpp"
#include "rotguard/providers.hpp"

namespace rotguard::sweep {

enum class Condition { Rotated, Corrected };

std::string_view to_string(Condition c) noexcept;
Condition parse_condition(std::string_view name);

enum class PredictorKind { None, Oracle, Model };

struct PredictorConfig {
  PredictorKind kind = PredictorKind::Oracle;
  std::filesystem::path model_file;
  pipeline::OracleErrorMode oracle_error;
};

struct SweepConfig {
  std::filesystem::path corpus_dir;
  int angle_start = 0;
  int angle_stop = 357;
  int angle_step = 3;
  std::vector<Condition> conditions{Condition::Rotated, Condition::Corrected};
  int max_results = providers::kDefaultMaxResults;
  int workers = 1;  // <= 0: OpenMP default
  std::uint64_t seed = 0;
  pipeline::PipelineOptions pipeline;

  // Used by the self-resolving run_sweep overload.
  providers::ProviderConfig provider;
  PredictorConfig predictor;
  std::filesystem::path cache_dir;

  /// Throws ConfigError unless start <= stop, step > 0, step divides
  /// (stop - start) and every angle is in [0, 360).
  void validate() const;
  std::vector<AngleDeg> angles() const;
};

struct SweepRecord {
  std::string image_id;
  AngleDeg applied_angle;
  Condition condition = Condition::Rotated;
  std::optional<double> percentage_error;
  std::optional<AngleDeg> predicted_total;  // corrected condition only
  std::optional<int> residual;              // circular_diff(applied, predicted_total)
  std::string error;                        // non-empty marks a failed measurement

  bool ok() const noexcept { return error.empty(); }
  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

struct CorpusImage {
  std::string id;
  Image image;
};

/// Every PNG/JPEG directly inside `dir`, sorted by file name; the id is the
/// file stem. Throws EmptyCorpus when there are none.
std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir);

/// Subject id the sweep uses for image `image_id` rotated by `angle`.
std::string subject_id(std::string_view image_id, AngleDeg angle);

struct SweepResult {
  std::vector<SweepRecord> records;  // image-major, then angle, then condition
  long failures = 0;
  long baseline_failures = 0;
};

/// Measures label drift for every (image, angle, condition).
///
/// Baselines come from the unrotated images. Rotated variants are the padded
/// canvases from rotate_with_pad; corrected variants run those through
/// correct_double_pass and are scored against the same baseline. All labels
/// go through `cache`. A failure is recorded on its row and the run goes on.
/// When `predictor` is an OraclePredictor it is told each subject's applied
/// rotation before the run. Output order does not depend on worker count.
SweepResult run_sweep(const SweepConfig& cfg, const std::vector<CorpusImage>& corpus,
                      providers::LabelProvider& provider, providers::LabelCache& cache,
                      pipeline::AnglePredictor* predictor);

/// Resolves corpus, provider, predictor and cache from `cfg`.
SweepResult run_sweep(const SweepConfig& cfg);

std::unique_ptr<pipeline::AnglePredictor> make_predictor(const PredictorConfig& cfg, std::uint64_t seed);

struct AngleAggregate {
  AngleDeg angle;
  std::optional<double> mean_pe_rotated;
  std::optional<double> mean_pe_corrected;
  std::optional<double> mean_residual;
  int n = 0;  // images with at least one successful record at this angle

  friend bool operator==(const AngleAggregate&, const AngleAggregate&) = default;
};

/// Per-angle means over successful records, ordered by angle.
std::vector<AngleAggregate> aggregate(const std::vector<SweepRecord>& records);

// Record formats ------------------------------------------------------------

inline constexpr std::string_view kRecordsCsvHeader =
    "image_id,applied_angle,condition,percentage_error,predicted_total,residual,error";
inline constexpr std::string_view kAggregateCsvHeader = "angle,mean_pe_rotated,mean_pe_corrected,mean_residual,n";

void write_records_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_records_jsonl(std::ostream& out, const std::vector<SweepRecord>& records);
void write_aggregates_csv(std::ostream& out, const std::vector<AngleAggregate>& aggregates);

/// Throws ConfigError on a malformed file.
std::vector<SweepRecord> read_records_csv(std::istream& in);
std::vector<SweepRecord> read_records_jsonl(std::istream& in);

}  // namespace rotguard::sweep
