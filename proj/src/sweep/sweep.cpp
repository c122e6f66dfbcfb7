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


#include "rotguard/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <memory>
#include <map>
#include <set>

#include "rotguard/errors.hpp"
#include "rotguard/geometry.hpp"
#include "rotguard/image_io.hpp"
#include "rotguard/similarity.hpp"

namespace rotguard::sweep {

std::string_view to_string(Condition c) noexcept {
  return c == Condition::Rotated ? "rotated" : "corrected";
}

Condition parse_condition(std::string_view name) {
  if (name == "rotated") return Condition::Rotated;
  if (name == "corrected") return Condition::Corrected;
  throw ConfigError("unknown condition '" + std::string(name) + "' (expected rotated or corrected)");
}

void SweepConfig::validate() const {
  if (angle_step <= 0) throw ConfigError("angle step must be positive");
  if (angle_start < 0 || angle_stop >= 360 || angle_start > angle_stop) {
    throw ConfigError("sweep angles must satisfy 0 <= start <= stop < 360");
  }
  if ((angle_stop - angle_start) % angle_step != 0) {
    throw ConfigError("angle step must divide (stop - start)");
  }
  if (conditions.empty()) throw ConfigError("at least one condition is required");
  if (max_results < 1) throw ConfigError("max_results must be >= 1");
}

std::vector<AngleDeg> SweepConfig::angles() const {
  validate();
  std::vector<AngleDeg> out;
  for (int a = angle_start; a <= angle_stop; a += angle_step) out.emplace_back(a);
  return out;
}

std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw EmptyCorpus("corpus directory does not exist: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && io::is_supported_image(entry.path())) files.push_back(entry.path());
  }
  if (files.empty()) {
    throw EmptyCorpus("no PNG/JPEG images in " + dir.string());
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusImage> corpus;
  corpus.reserve(files.size());
  for (const auto& f : files) corpus.push_back({f.stem().string(), io::read_image(f)});
  return corpus;
}

std::string subject_id(std::string_view image_id, AngleDeg angle) {
  return std::string(image_id) + "@" + std::to_string(angle.value());
}

std::unique_ptr<pipeline::AnglePredictor> make_predictor(const PredictorConfig& cfg, std::uint64_t seed) {
  switch (cfg.kind) {
    case PredictorKind::None:
      return nullptr;
    case PredictorKind::Oracle:
      return std::make_unique<pipeline::OraclePredictor>(cfg.oracle_error, seed);
    case PredictorKind::Model:
      return std::make_unique<pipeline::ModelPredictor>(cfg.model_file);
  }
  return nullptr;
}

SweepResult run_sweep(const SweepConfig& cfg, const std::vector<CorpusImage>& corpus,
                      providers::LabelProvider& provider, providers::LabelCache& cache,
                      pipeline::AnglePredictor* predictor) {
  const std::vector<AngleDeg> angles = cfg.angles();
  if (corpus.empty()) throw EmptyCorpus("sweep corpus is empty");
  const bool wants_corrected =
      std::find(cfg.conditions.begin(), cfg.conditions.end(), Condition::Corrected) != cfg.conditions.end();
  if (wants_corrected && predictor == nullptr) {
    throw ConfigError("the corrected condition needs an angle predictor");
  }
  if (auto* oracle = dynamic_cast<pipeline::OraclePredictor*>(predictor)) {
    for (const auto& img : corpus)
      for (AngleDeg a : angles) oracle->record(subject_id(img.id, a), a);
  }

  const int n_images = static_cast<int>(corpus.size());
  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();

  // Baselines first: every record of an image is scored against them.
  std::vector<std::optional<LabelSet>> baselines(corpus.size());
  std::vector<std::string> baseline_errors(corpus.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n_images; ++i) {
    try {
      auto req = providers::make_request(corpus[i].image, cfg.max_results,
                                         providers::SubjectHint{corpus[i].id, AngleDeg(0)});
      LabelSet labels = providers::cached_label(cache, provider, req);
      if (labels.empty()) throw EmptyBaseline("baseline for '" + corpus[i].id + "' returned no labels");
      baselines[i] = std::move(labels);
    } catch (const std::exception& e) {
      baseline_errors[i] = std::string("baseline: ") + e.what();
    }
  }

  struct Task {
    int image;
    AngleDeg angle;
    Condition condition;
  };
  std::vector<Task> tasks;
  tasks.reserve(corpus.size() * angles.size() * cfg.conditions.size());
  for (int i = 0; i < n_images; ++i)
    for (AngleDeg a : angles)
      for (Condition c : cfg.conditions) tasks.push_back({i, a, c});

  SweepResult result;
  result.records.resize(tasks.size());
  const long n_tasks = static_cast<long>(tasks.size());

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long t = 0; t < n_tasks; ++t) {
    const Task& task = tasks[t];
    const CorpusImage& src = corpus[task.image];
    SweepRecord& rec = result.records[t];
    rec.image_id = src.id;
    rec.applied_angle = task.angle;
    rec.condition = task.condition;
    if (!baselines[task.image]) {
      rec.error = baseline_errors[task.image];
      continue;
    }
    try {
      Image rotated = geometry::rotate_with_pad(src.image, task.angle);
      Image scored = std::move(rotated);
      AngleDeg true_rotation = task.angle;
      if (task.condition == Condition::Corrected) {
        pipeline::CorrectionResult fixed =
            pipeline::correct_double_pass(*predictor, scored, subject_id(src.id, task.angle), cfg.pipeline);
        rec.predicted_total = fixed.total_correction;
        rec.residual = geometry::circular_diff(task.angle, fixed.total_correction);
        true_rotation = task.angle - fixed.total_correction;
        scored = std::move(fixed.corrected);
      }
      auto req = providers::make_request(scored, cfg.max_results, providers::SubjectHint{src.id, true_rotation});
      const LabelSet labels = providers::cached_label(cache, provider, req);
      rec.percentage_error = similarity_index(*baselines[task.image], labels).percentage_error;
    } catch (const std::exception& e) {
      rec.percentage_error.reset();
      rec.predicted_total.reset();
      rec.residual.reset();
      rec.error = e.what();
    }
  }

  for (const auto& r : result.records) result.failures += r.ok() ? 0 : 1;
  for (const auto& e : baseline_errors) result.baseline_failures += e.empty() ? 0 : 1;
  return result;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::vector<CorpusImage> corpus = load_corpus(cfg.corpus_dir);
  if (cfg.cache_dir.empty()) throw ConfigError("sweep needs a cache directory");
  providers::LabelCache cache(cfg.cache_dir);
  auto provider = providers::make_provider(cfg.provider);
  const bool wants_corrected =
      std::find(cfg.conditions.begin(), cfg.conditions.end(), Condition::Corrected) != cfg.conditions.end();
  auto predictor = wants_corrected ? make_predictor(cfg.predictor, cfg.seed) : nullptr;
  return run_sweep(cfg, corpus, *provider, cache, predictor.get());
}

std::vector<AngleAggregate> aggregate(const std::vector<SweepRecord>& records) {
  struct Acc {
    double pe_rot = 0, pe_cor = 0, residual = 0;
    int n_rot = 0, n_cor = 0, n_res = 0;
    std::set<std::string> images;
  };
  std::map<int, Acc> by_angle;
  for (const SweepRecord& r : records) {
    if (!r.ok() || !r.percentage_error) continue;
    Acc& acc = by_angle[r.applied_angle.value()];
    acc.images.insert(r.image_id);
    if (r.condition == Condition::Rotated) {
      acc.pe_rot += *r.percentage_error;
      ++acc.n_rot;
    } else {
      acc.pe_cor += *r.percentage_error;
      ++acc.n_cor;
      if (r.residual) {
        acc.residual += *r.residual;
        ++acc.n_res;
      }
    }
  }

  std::vector<AngleAggregate> out;
  out.reserve(by_angle.size());
  for (const auto& [angle, acc] : by_angle) {
    AngleAggregate agg;
    agg.angle = AngleDeg(angle);
    if (acc.n_rot > 0) agg.mean_pe_rotated = acc.pe_rot / acc.n_rot;
    if (acc.n_cor > 0) agg.mean_pe_corrected = acc.pe_cor / acc.n_cor;
    if (acc.n_res > 0) agg.mean_residual = acc.residual / acc.n_res;
    agg.n = static_cast<int>(acc.images.size());
    out.push_back(agg);
  }
  return out;
}

}  // namespace rotguard::sweep
