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

#include <fstream>
#include <random>
#include <thread>

#include "../support/test_images.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/geometry.hpp"
#include "rotguard/providers.hpp"
#include "rotguard/similarity.hpp"

using namespace rotguard;
using namespace rotguard::providers;
using rotguard::testing::noise_image;
using rotguard::testing::TempDir;

namespace {

// Deterministic stand-in: labels are a function of the image digest.
class DigestProvider final : public LabelProvider {
 public:
  std::string id() const override { return "digest"; }
  LabelSet label(const LabelRequest& req) override {
    const double c = 0.5 + (std::stoul(req.image_sha256.substr(0, 4), nullptr, 16) % 400) / 1000.0;
    return LabelSet({{"h" + req.image_sha256.substr(0, 6), c}, {"thing", 0.42}}).truncated(req.max_results);
  }
};

class FailingProvider final : public LabelProvider {
 public:
  std::string id() const override { return "failing"; }
  LabelSet label(const LabelRequest&) override { throw QuotaError("quota"); }
};

std::size_t count_files(const std::filesystem::path& dir) {
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

}  // namespace

TEST_CASE("requests") {
  const Image img = noise_image(8, 8, 1);
  const LabelRequest a = make_request(img);
  CHECK(a.max_results == kDefaultMaxResults);
  CHECK(a.image_sha256.size() == 64);
  CHECK(make_request(img).image_sha256 == a.image_sha256);
  CHECK_THROWS_AS(make_request(img, 0), ConfigError);
}

TEST_CASE("cache keys") {
  DigestProvider p;
  const Image img = noise_image(8, 8, 1);
  const CacheKey k = cache_key(p, make_request(img));
  CHECK(k.hex() == cache_key(p, make_request(img)).hex());
  CHECK(k.hex().size() == 64);
  CHECK(k.hex() != cache_key(p, make_request(img, 5)).hex());
  CountingProvider counted(p);
  CHECK(cache_key(counted, make_request(img)).hex() == k.hex());
  CacheKey other = k;
  other.provider_id = "other";
  CHECK(other.hex() != k.hex());
}

TEST_CASE("cached_label hits skip the provider") {
  TempDir dir;
  LabelCache cache(dir.path() / "cache");
  DigestProvider inner;
  CountingProvider p(inner);
  const Image img = noise_image(16, 16, 2);

  const LabelSet first = cached_label(cache, p, make_request(img));
  const LabelSet second = cached_label(cache, p, make_request(img));
  CHECK(first == second);
  CHECK(p.calls() == 1);
  CHECK(cache.stats().hits == 1);
  CHECK(cache.stats().misses == 1);

  // One pixel differs: new digest, new call.
  Image tweaked = img;
  tweaked.pixel(3, 3)[0] ^= 1;
  cached_label(cache, p, make_request(tweaked));
  CHECK(p.calls() == 2);

  // A second cache over the same directory sees the records.
  LabelCache reopened(dir.path() / "cache");
  CHECK(cached_label(reopened, p, make_request(img)) == first);
  CHECK(p.calls() == 2);

  // Records are the canonical LabelSet JSON.
  const auto rec = cache.record_path(cache_key(p, make_request(img)));
  std::ifstream in(rec);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text == dump_label_set(first) + "\n");
}

TEST_CASE("provider errors are not cached") {
  TempDir dir;
  LabelCache cache(dir.path());
  FailingProvider p;
  CHECK_THROWS_AS(cached_label(cache, p, make_request(Image(2, 2))), QuotaError);
  CHECK(count_files(dir.path()) == 0);
}

TEST_CASE("corrupt records fail loudly") {
  TempDir dir;
  LabelCache cache(dir.path());
  DigestProvider p;
  const auto req = make_request(noise_image(4, 4, 3));
  const auto path = cache.record_path(cache_key(p, req));
  {
    std::ofstream(path) << "{\"labels\": [";
  }
  CHECK_THROWS_AS(cached_label(cache, p, req), CacheCorrupt);
  {
    std::ofstream(path) << R"({"labels":[{"description":"a","score":-1}]})";
  }
  CHECK_THROWS_AS(cache.lookup(cache_key(p, req)), CacheCorrupt);
  {
    std::ofstream(path) << R"({"nope":1})";
  }
  CHECK_THROWS_AS(cache.lookup(cache_key(p, req)), CacheCorrupt);
}

TEST_CASE("cache transparency over a random request sequence") {
  TempDir dir;
  LabelCache cache(dir.path());
  DigestProvider direct, behind;
  std::mt19937 rng(8);
  std::vector<Image> pool;
  for (int i = 0; i < 12; ++i) pool.push_back(noise_image(6, 6, i));
  for (int step = 0; step < 200; ++step) {
    const auto req = make_request(pool[rng() % pool.size()], 1 + rng() % 3);
    REQUIRE(cached_label(cache, behind, req) == direct.label(req));
  }
}

TEST_CASE("concurrent misses on one key reach the provider once") {
  TempDir dir;
  LabelCache cache(dir.path());
  DigestProvider inner;
  CountingProvider p(inner);
  const auto req = make_request(noise_image(32, 32, 9));
  std::vector<std::thread> threads;
  std::vector<LabelSet> got(8);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] { got[t] = cached_label(cache, p, req); });
  }
  for (auto& t : threads) t.join();
  CHECK(p.calls() == 1);
  for (const auto& g : got) CHECK(g == got[0]);
  CHECK(count_files(dir.path()) == 1);  // no temp files left behind
}

TEST_CASE("fixture provider replays recorded responses") {
  TempDir dir;
  const Image img = noise_image(10, 10, 5);
  const LabelSet recorded({{"street", 0.93}, {"road", 0.88}});
  {
    FixtureProvider probe(dir.path());
    LabelCache(dir.path()).store(cache_key(probe, make_request(img)), recorded);
  }
  FixtureProvider a(dir.path()), b(dir.path());
  CHECK(a.id() == "google-vision");
  CHECK(a.label(make_request(img)) == recorded);
  CHECK(dump_label_set(a.label(make_request(img))) == dump_label_set(b.label(make_request(img))));
  CHECK_THROWS_AS(a.label(make_request(noise_image(10, 10, 6))), FixtureMiss);
  CHECK_THROWS_AS(a.label(make_request(img, 1)), FixtureMiss);  // max_results is part of the key

  // Fixtures recorded from the live client are readable by the cache too.
  LabelCache cache(dir.path() / "c");
  CountingProvider counted(a);
  CHECK(cached_label(cache, counted, make_request(img)) == recorded);
  CHECK(cached_label(cache, counted, make_request(img)) == recorded);
  CHECK(counted.calls() == 1);
}

TEST_CASE("degradation profile") {
  DegradationProfile p;
  p.base_labels = LabelSet({{"sign", 0.9}, {"road", 0.6}});
  p.floors = {0.4, 1.0};
  p.drop_threshold = 0.5;
  p.validate();
  CHECK(p.decay(0, 0) == 1.0);
  CHECK(p.decay(0, 180) == doctest::Approx(0.4));
  CHECK(p.decay(0, 90) == doctest::Approx(0.7));
  CHECK(p.decay(1, 123) == 1.0);
  for (int d = 0; d <= 180; ++d) {
    REQUIRE(p.decay(0, d) >= 0.0);
    REQUIRE(p.decay(0, d) <= 1.0);
    if (d > 0) REQUIRE(p.decay(0, d) < p.decay(0, d - 1));
  }

  // base 0.9, floor 0.4, threshold 0.5: present upright, gone at 180 (0.36).
  CHECK(synthetic_label(p, AngleDeg(0)) == p.base_labels);
  const LabelSet flipped = synthetic_label(p, AngleDeg(180));
  CHECK_FALSE(flipped.confidence_of("sign").has_value());
  CHECK(flipped.confidence_of("road") == 0.6);
  for (int a = 0; a < 360; ++a) REQUIRE(synthetic_label(p, AngleDeg(a)) == synthetic_label(p, AngleDeg(360 - a)));

  DegradationProfile bad = p;
  bad.floors = {0.4};
  CHECK_THROWS_AS(bad.validate(), InvalidLabelSet);
  bad.floors = {1.2, 0.3};
  CHECK_THROWS_AS(bad.validate(), InvalidLabelSet);
  bad = p;
  bad.drop_threshold = 0.7;
  CHECK_THROWS_AS(bad.validate(), InvalidLabelSet);
}

TEST_CASE("synthetic provider") {
  SyntheticProvider p(42);
  const auto hint = [](const std::string& id, int a) { return SubjectHint{id, AngleDeg(a)}; };
  const Image img(4, 4);

  const DegradationProfile prof = p.profile_for("img-a");
  CHECK(prof.base_labels.size() >= 6);
  CHECK(prof.base_labels.size() <= 10);
  CHECK(p.label(make_request(img, 20, hint("img-a", 0))) == prof.base_labels);
  CHECK(p.label(make_request(img, 3, hint("img-a", 0))).size() == 3);
  CHECK_THROWS_AS(p.label(make_request(img)), ProviderError);

  // Same seed, same world; another seed, another id.
  SyntheticProvider twin(42), other(43);
  CHECK(twin.label(make_request(img, 20, hint("img-a", 77))) == p.label(make_request(img, 20, hint("img-a", 77))));
  CHECK(twin.id() == p.id());
  CHECK(other.id() != p.id());
  CHECK(p.profile_for("img-b").base_labels != prof.base_labels);

  // Explicit profiles win over derived ones.
  DegradationProfile fixed;
  fixed.base_labels = LabelSet({{"x", 0.8}});
  fixed.floors = {0.0};
  p.set_profile("img-c", fixed);
  CHECK(p.label(make_request(img, 20, hint("img-c", 0))) == fixed.base_labels);
  CHECK(p.label(make_request(img, 20, hint("img-c", 180))).empty());

  CHECK_THROWS_AS(SyntheticProvider(1, SyntheticOptions{.min_labels = 5, .max_labels = 2}), ConfigError);
}

TEST_CASE("synthetic similarity is non-increasing in distance from upright") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticProvider p(seed);
    for (const char* id : {"a", "b", "c", "d"}) {
      const auto prof = p.profile_for(id);
      double prev = 101;
      for (int d = 0; d <= 180; ++d) {
        const double si = similarity_index(prof.base_labels, synthetic_label(prof, AngleDeg(d))).similarity_index;
        REQUIRE(si <= prev + 1e-12);
        prev = si;
      }
      CHECK(prev < 100.0);  // the curve actually moves
    }
  }
}

TEST_CASE("provider factory") {
  CHECK(parse_provider_kind("live") == ProviderKind::Live);
  CHECK(parse_provider_kind("fixture") == ProviderKind::Fixture);
  CHECK(parse_provider_kind("synthetic") == ProviderKind::Synthetic);
  CHECK_THROWS_AS(parse_provider_kind("vision"), ConfigError);

  ProviderConfig cfg;
  cfg.kind = ProviderKind::Synthetic;
  cfg.seed = 9;
  CHECK(make_provider(cfg)->id() == SyntheticProvider(9).id());
  cfg.kind = ProviderKind::Fixture;
  CHECK_THROWS_AS(make_provider(cfg), ConfigError);
  cfg.kind = ProviderKind::Live;
  cfg.vision = VisionApiOptions{};
  CHECK_THROWS_AS(make_provider(cfg), AuthError);
}
