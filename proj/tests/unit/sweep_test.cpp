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


#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/test_images.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/image_io.hpp"
#include "rotguard/sweep.hpp"

using namespace rotguard;
using namespace rotguard::sweep;
using rotguard::testing::smooth_image;
using rotguard::testing::TempDir;

namespace {

std::vector<CorpusImage> small_corpus(int n = 3) {
  std::vector<CorpusImage> c;
  for (int i = 0; i < n; ++i) c.push_back({"img" + std::to_string(i), smooth_image(40 + 4 * i, 30 + 3 * i, i)});
  return c;
}

SweepConfig small_config(int step = 30) {
  SweepConfig cfg;
  cfg.angle_stop = 360 - step;
  cfg.angle_step = step;
  cfg.seed = 11;
  return cfg;
}

// Fails for one image id (baseline included) and for one angle of another.
class FlakyProvider final : public providers::LabelProvider {
 public:
  explicit FlakyProvider(providers::LabelProvider& inner) : inner_(inner) {}
  std::string id() const override { return "flaky/" + inner_.id(); }
  LabelSet label(const providers::LabelRequest& req) override {
    if (req.subject->image_id == "img1") throw TransportError("network down");
    if (req.subject->image_id == "img2" && req.subject->true_rotation.value() == 60) throw QuotaError("quota");
    return inner_.label(req);
  }

 private:
  providers::LabelProvider& inner_;
};

std::string csv_of(const std::vector<SweepRecord>& r) {
  std::ostringstream os;
  write_records_csv(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("sweep config validation") {
  SweepConfig cfg;
  CHECK(cfg.angles().size() == 120);
  CHECK(cfg.angles().front().value() == 0);
  CHECK(cfg.angles().back().value() == 357);
  cfg.angle_step = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.angle_step = 5;  // does not divide 357
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SweepConfig{};
  cfg.angle_stop = 360;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SweepConfig{};
  cfg.angle_start = 90;
  cfg.angle_stop = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SweepConfig{};
  cfg.conditions.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SweepConfig{};
  cfg.angle_start = cfg.angle_stop = 45;
  CHECK(cfg.angles().size() == 1);
}

TEST_CASE("conditions and subject ids") {
  CHECK(parse_condition("rotated") == Condition::Rotated);
  CHECK(parse_condition("corrected") == Condition::Corrected);
  CHECK_THROWS_AS(parse_condition("Rotated"), ConfigError);
  CHECK(to_string(Condition::Corrected) == "corrected");
  CHECK(subject_id("street_01", AngleDeg(93)) == "street_01@93");
}

TEST_CASE("corpus loading") {
  TempDir dir;
  CHECK_THROWS_AS(load_corpus(dir / "nope"), EmptyCorpus);
  CHECK_THROWS_AS(load_corpus(dir.path()), EmptyCorpus);
  io::write_image(dir / "b.png", smooth_image(10, 10, 1));
  io::write_image(dir / "a.jpg", smooth_image(12, 10, 2));
  std::ofstream(dir / "notes.txt") << "ignored";
  const auto c = load_corpus(dir.path());
  REQUIRE(c.size() == 2);
  CHECK(c[0].id == "a");
  CHECK(c[1].id == "b");
  CHECK(c[1].image == smooth_image(10, 10, 1));
}

TEST_CASE("synthetic + exact oracle sweep") {
  TempDir dir;
  const auto corpus = small_corpus();
  const SweepConfig cfg = small_config();
  providers::SyntheticProvider synth(cfg.seed);
  providers::CountingProvider counted(synth);
  providers::LabelCache cache(dir / "cache");
  pipeline::OraclePredictor oracle;
  const SweepResult res = run_sweep(cfg, corpus, counted, cache, &oracle);

  // completeness and ordering
  REQUIRE(res.records.size() == 3u * 12u * 2u);
  CHECK(res.failures == 0);
  CHECK(res.records[0].image_id == "img0");
  CHECK(res.records[0].condition == Condition::Rotated);
  CHECK(res.records[1].condition == Condition::Corrected);
  CHECK(res.records[2].applied_angle.value() == 30);

  for (const SweepRecord& r : res.records) {
    REQUIRE(r.ok());
    REQUIRE(r.percentage_error.has_value());
    REQUIRE(*r.percentage_error >= 0.0);
    REQUIRE(*r.percentage_error <= 100.0);
    if (r.condition == Condition::Rotated) {
      CHECK_FALSE(r.residual.has_value());
      CHECK_FALSE(r.predicted_total.has_value());
    } else {
      REQUIRE(r.residual.has_value());
      CHECK(*r.residual == geometry::circular_diff(r.applied_angle, *r.predicted_total));
      CHECK(*r.residual == 0);
      CHECK(*r.percentage_error == doctest::Approx(0.0).epsilon(1e-12));
    }
    if (r.applied_angle.value() == 0) CHECK(*r.percentage_error == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  }

  // Resumability: the same sweep over a warm cache makes no provider calls.
  const long calls = counted.calls();
  CHECK(calls > 0);
  const SweepResult again = run_sweep(cfg, corpus, counted, cache, &oracle);
  CHECK(counted.calls() == calls);
  CHECK(again.records == res.records);
}

TEST_CASE("worker count does not change the records") {
  const auto corpus = small_corpus();
  SweepConfig cfg = small_config(45);
  cfg.predictor.oracle_error.kind = pipeline::OracleErrorKind::Flip180;
  cfg.predictor.oracle_error.probability = 0.5;
  std::string first;
  for (int workers : {1, 3, 0}) {
    TempDir dir;
    cfg.workers = workers;
    providers::SyntheticProvider synth(cfg.seed);
    providers::LabelCache cache(dir / "cache");
    auto pred = make_predictor(cfg.predictor, cfg.seed);
    const std::string csv = csv_of(run_sweep(cfg, corpus, synth, cache, pred.get()).records);
    if (first.empty()) first = csv;
    CHECK(csv == first);
  }
}

TEST_CASE("failures are recorded, not dropped") {
  TempDir dir;
  const auto corpus = small_corpus();
  const SweepConfig cfg = small_config();
  providers::SyntheticProvider synth(cfg.seed);
  FlakyProvider flaky(synth);
  providers::LabelCache cache(dir / "cache");
  pipeline::OraclePredictor oracle;
  const SweepResult res = run_sweep(cfg, corpus, flaky, cache, &oracle);
  REQUIRE(res.records.size() == 72);
  CHECK(res.baseline_failures == 1);
  long failed = 0;
  for (const auto& r : res.records) {
    failed += !r.ok();
    if (r.image_id == "img1") {
      CHECK_FALSE(r.ok());
      CHECK(r.error.find("baseline") != std::string::npos);
      CHECK_FALSE(r.percentage_error.has_value());
    }
    if (r.image_id == "img2" && r.applied_angle.value() == 60 && r.condition == Condition::Rotated) {
      CHECK(r.error.find("quota") != std::string::npos);
    }
  }
  CHECK(res.failures == failed);
  CHECK(failed == 24 + 1);
  // Successful records = total - tallied failures.
  CHECK(static_cast<long>(res.records.size()) - res.failures == 47);
}

TEST_CASE("corrected condition needs a predictor") {
  TempDir dir;
  providers::SyntheticProvider synth(1);
  providers::LabelCache cache(dir.path());
  CHECK_THROWS_AS(run_sweep(small_config(), small_corpus(), synth, cache, nullptr), ConfigError);
  SweepConfig rotated_only = small_config();
  rotated_only.conditions = {Condition::Rotated};
  CHECK(run_sweep(rotated_only, small_corpus(1), synth, cache, nullptr).records.size() == 12);
  CHECK_THROWS_AS(run_sweep(rotated_only, {}, synth, cache, nullptr), EmptyCorpus);
}

TEST_CASE("self-resolving sweep") {
  TempDir dir;
  std::filesystem::create_directories(dir / "corpus");
  for (const auto& c : small_corpus(2)) io::write_image(dir / "corpus" / (c.id + ".png"), c.image);
  SweepConfig cfg = small_config(90);
  cfg.corpus_dir = dir / "corpus";
  cfg.cache_dir = dir / "cache";
  cfg.provider.kind = providers::ProviderKind::Synthetic;
  cfg.provider.seed = cfg.seed;
  const SweepResult res = run_sweep(cfg);
  CHECK(res.records.size() == 2u * 4u * 2u);
  CHECK(res.failures == 0);
  cfg.corpus_dir = dir / "empty";
  CHECK_THROWS_AS(run_sweep(cfg), EmptyCorpus);
}

TEST_CASE("aggregate") {
  CHECK(aggregate({}).empty());

  SweepRecord one{"a", AngleDeg(90), Condition::Corrected, 12.5, AngleDeg(87), 3, ""};
  auto agg = aggregate({one});
  REQUIRE(agg.size() == 1);
  CHECK(agg[0].angle.value() == 90);
  CHECK_FALSE(agg[0].mean_pe_rotated.has_value());
  CHECK(*agg[0].mean_pe_corrected == 12.5);
  CHECK(*agg[0].mean_residual == 3.0);
  CHECK(agg[0].n == 1);

  const std::vector<SweepRecord> two{
      {"a", AngleDeg(90), Condition::Rotated, 20.0, std::nullopt, std::nullopt, ""},
      {"b", AngleDeg(90), Condition::Rotated, 40.0, std::nullopt, std::nullopt, ""},
      {"c", AngleDeg(90), Condition::Rotated, std::nullopt, std::nullopt, std::nullopt, "boom"},
      {"a", AngleDeg(3), Condition::Rotated, 1.0, std::nullopt, std::nullopt, ""},
  };
  agg = aggregate(two);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].angle.value() == 3);  // ordered by angle
  CHECK(*agg[1].mean_pe_rotated == 30.0);
  CHECK(agg[1].n == 2);
  CHECK_FALSE(agg[1].mean_residual.has_value());
}

TEST_CASE("records round-trip through CSV and JSONL") {
  const std::vector<SweepRecord> recs{
      {"plain", AngleDeg(0), Condition::Rotated, 0.0, std::nullopt, std::nullopt, ""},
      {"with,comma", AngleDeg(3), Condition::Corrected, 36.217303822937623, AngleDeg(357), 6, ""},
      {"q\"uote", AngleDeg(357), Condition::Corrected, std::nullopt, std::nullopt, std::nullopt,
       "line one\nline \"two\", with comma"},
      {"tiny", AngleDeg(180), Condition::Rotated, 1e-300, std::nullopt, std::nullopt, ""},
  };
  std::stringstream csv;
  write_records_csv(csv, recs);
  CHECK(csv.str().rfind(std::string(kRecordsCsvHeader) + "\n", 0) == 0);
  CHECK(read_records_csv(csv) == recs);

  std::stringstream jsonl;
  write_records_jsonl(jsonl, recs);
  CHECK(read_records_jsonl(jsonl) == recs);
}

TEST_CASE("record readers reject malformed input") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_records_csv(empty), ConfigError);
  std::stringstream wrong_header("a,b,c\n");
  CHECK_THROWS_AS(read_records_csv(wrong_header), ConfigError);
  std::stringstream short_row(std::string(kRecordsCsvHeader) + "\nx,1,rotated\n");
  CHECK_THROWS_AS(read_records_csv(short_row), ConfigError);
  std::stringstream bad_number(std::string(kRecordsCsvHeader) + "\nx,1,rotated,abc,,,\n");
  CHECK_THROWS_AS(read_records_csv(bad_number), ConfigError);
  std::stringstream bad_condition(std::string(kRecordsCsvHeader) + "\nx,1,sideways,1,,,\n");
  CHECK_THROWS_AS(read_records_csv(bad_condition), ConfigError);
  std::stringstream unterminated(std::string(kRecordsCsvHeader) + "\n\"x,1,rotated,1,,,\n");
  CHECK_THROWS_AS(read_records_csv(unterminated), ConfigError);
  std::stringstream bad_json("{\"image_id\": 3}\n");
  CHECK_THROWS_AS(read_records_jsonl(bad_json), ConfigError);
  std::stringstream not_json("nope\n");
  CHECK_THROWS_AS(read_records_jsonl(not_json), ConfigError);
}

TEST_CASE("aggregate CSV layout") {
  const std::vector<AngleAggregate> agg{{AngleDeg(0), 0.0, 0.0, 0.0, 3}, {AngleDeg(3), 12.5, std::nullopt, 0.5, 2}};
  std::ostringstream os;
  write_aggregates_csv(os, agg);
  CHECK(os.str() == "angle,mean_pe_rotated,mean_pe_corrected,mean_residual,n\n0,0,0,0,3\n3,12.5,,0.5,2\n");
}
