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

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotguard/image.hpp"
#include "rotguard/labels.hpp"

namespace rotguard::providers {

inline constexpr int kDefaultMaxResults = 20;

/// Ground truth a simulation backend may consult; real backends ignore it.
struct SubjectHint {
  std::string image_id;
  AngleDeg true_rotation;
};

/// One labeling call. The image travels PNG-encoded; its digest is computed
/// once, here, and reused by the cache.
struct LabelRequest {
  std::vector<std::uint8_t> png;
  std::string image_sha256;
  int max_results = kDefaultMaxResults;
  std::optional<SubjectHint> subject;
};

LabelRequest make_request(const Image& img, int max_results = kDefaultMaxResults,
                          std::optional<SubjectHint> subject = std::nullopt);

/// A labeling backend. Implementations must be safe for concurrent calls and
/// return a normalized set with at most max_results entries.
class LabelProvider {
 public:
  virtual ~LabelProvider() = default;
  /// Stable identifier; part of the cache key.
  virtual std::string id() const = 0;
  virtual LabelSet label(const LabelRequest& req) = 0;
};

/// Forwards to another provider and counts the calls that reach it.
class CountingProvider final : public LabelProvider {
 public:
  explicit CountingProvider(LabelProvider& inner) : inner_(inner) {}
  std::string id() const override { return inner_.id(); }
  LabelSet label(const LabelRequest& req) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.label(req);
  }
  long calls() const noexcept { return calls_.load(std::memory_order_relaxed); }

 private:
  LabelProvider& inner_;
  std::atomic<long> calls_{0};
};

// ---------------------------------------------------------------------------
// Cache

struct CacheKey {
  std::string image_digest;
  std::string provider_id;
  int max_results;

  /// SHA-256 over the three fields; also the record's file stem.
  std::string hex() const;
};

CacheKey cache_key(const LabelProvider& provider, const LabelRequest& req);

/// Content-addressed store: one LabelSet JSON record per key. Records are
/// written to a temporary file and renamed into place, so readers never see
/// a partial record.
class LabelCache {
 public:
  explicit LabelCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path record_path(const CacheKey& key) const;

  /// Throws CacheCorrupt if a record exists but fails schema validation.
  std::optional<LabelSet> lookup(const CacheKey& key) const;
  void store(const CacheKey& key, const LabelSet& labels);

  struct Stats {
    long hits = 0;
    long misses = 0;
  };
  Stats stats() const noexcept { return {hits_.load(), misses_.load()}; }

 private:
  friend LabelSet cached_label(LabelCache&, LabelProvider&, const LabelRequest&);

  std::mutex& stripe_for(const std::string& key_hex);

  std::filesystem::path dir_;
  std::atomic<long> hits_{0};
  std::atomic<long> misses_{0};
  std::array<std::mutex, 64> stripes_;
};

/// Cached call: a hit never reaches the provider; a miss calls it once and
/// persists the answer. Concurrent misses on the same key are coalesced.
LabelSet cached_label(LabelCache& cache, LabelProvider& provider, const LabelRequest& req);

// ---------------------------------------------------------------------------
// Backends

/// Replays recorded responses from a directory laid out like a LabelCache.
/// Throws FixtureMiss when no record exists for a request.
class FixtureProvider final : public LabelProvider {
 public:
  explicit FixtureProvider(std::filesystem::path dir, std::string recorded_provider_id = "google-vision");
  std::string id() const override { return recorded_id_; }
  LabelSet label(const LabelRequest& req) override;

 private:
  LabelCache store_;
  std::string recorded_id_;
};

/// How label confidences fall off with rotation: each base label is scaled
/// by decay(d) = 1 - (1 - floor) * d / 180, d being the circular distance of
/// the true rotation from upright. Labels that fall below drop_threshold are
/// omitted.
struct DegradationProfile {
  LabelSet base_labels;
  std::vector<double> floors;  // one per base label, in [0, 1]
  double drop_threshold = 0.5;

  double decay(std::size_t label_index, int circular_distance) const;
  /// Throws InvalidLabelSet on size mismatch, floors outside [0, 1] or a
  /// base confidence below drop_threshold.
  void validate() const;
};

LabelSet synthetic_label(const DegradationProfile& profile, AngleDeg rotation);

struct SyntheticOptions {
  double floor = 0.4;
  double floor_jitter = 0.15;
  double drop_threshold = 0.5;
  int min_labels = 6;
  int max_labels = 10;
};

/// Quota-free stand-in for the live API. Labels depend only on the request's
/// SubjectHint: the profile for hint.image_id (explicit, or derived from the
/// seed) evaluated at hint.true_rotation. Requests without a hint are
/// rejected with ProviderError.
class SyntheticProvider final : public LabelProvider {
 public:
  explicit SyntheticProvider(std::uint64_t seed, SyntheticOptions options = {});

  std::string id() const override;
  LabelSet label(const LabelRequest& req) override;

  /// Overrides the derived profile for one image id.
  void set_profile(const std::string& image_id, DegradationProfile profile);
  DegradationProfile profile_for(const std::string& image_id) const;

 private:
  std::uint64_t seed_;
  SyntheticOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, DegradationProfile> explicit_;
};

struct VisionApiOptions {
  std::string endpoint = "https://vision.googleapis.com";
  std::string path = "/v1/images:annotate";
  std::string api_key;       // sent as ?key=
  std::string bearer_token;  // sent as Authorization: Bearer
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{1000};
  std::chrono::seconds timeout{30};
  int max_in_flight = 4;
  int requests_per_minute = 600;  // 0 disables the ceiling

  /// Reads GOOGLE_API_KEY and GOOGLE_ACCESS_TOKEN.
  static VisionApiOptions from_environment();
};

/// Request body for images:annotate with a single LABEL_DETECTION feature.
std::string build_annotate_request(const LabelRequest& req);
/// Maps a 200 response body onto a LabelSet; an `error` member is turned into
/// AuthError / QuotaError / ProviderError.
LabelSet parse_annotate_response(std::string_view body, int max_results);

/// Google Cloud Vision label detection over REST. Transport failures and 5xx
/// answers are retried with exponential backoff; quota errors are not.
class VisionApiProvider final : public LabelProvider {
 public:
  /// Throws AuthError when neither an API key nor a bearer token is set.
  explicit VisionApiProvider(VisionApiOptions options);
  ~VisionApiProvider() override;

  std::string id() const override { return "google-vision"; }
  LabelSet label(const LabelRequest& req) override;

 private:
  class Limiter;
  VisionApiOptions options_;
  std::unique_ptr<Limiter> limiter_;
};

// ---------------------------------------------------------------------------

enum class ProviderKind { Live, Fixture, Synthetic };

struct ProviderConfig {
  ProviderKind kind = ProviderKind::Synthetic;
  std::filesystem::path fixture_dir;
  std::string recorded_provider_id = "google-vision";
  std::uint64_t seed = 0;
  SyntheticOptions synthetic;
  VisionApiOptions vision;
};

ProviderKind parse_provider_kind(std::string_view name);
std::unique_ptr<LabelProvider> make_provider(const ProviderConfig& cfg);

}  // namespace rotguard::providers
