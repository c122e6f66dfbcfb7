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


#include <fstream>
#include <functional>
#include <sstream>
#include <system_error>
#include <thread>

#include <unistd.h>

#include "rotguard/digest.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/image_io.hpp"
#include "rotguard/providers.hpp"

namespace rotguard::providers {

LabelRequest make_request(const Image& img, int max_results, std::optional<SubjectHint> subject) {
  if (max_results < 1) {
    throw ConfigError("max_results must be >= 1");
  }
  LabelRequest req;
  req.png = io::encode_png(img);
  req.image_sha256 = sha256_hex(req.png);
  req.max_results = max_results;
  req.subject = std::move(subject);
  return req;
}

std::string CacheKey::hex() const {
  return sha256_hex(image_digest + "\n" + provider_id + "\n" + std::to_string(max_results));
}

CacheKey cache_key(const LabelProvider& provider, const LabelRequest& req) {
  return {req.image_sha256, provider.id(), req.max_results};
}

LabelCache::LabelCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw ConfigError("cannot create cache directory " + dir_.string() + ": " + ec.message());
  }
}

std::filesystem::path LabelCache::record_path(const CacheKey& key) const { return dir_ / (key.hex() + ".json"); }

std::optional<LabelSet> LabelCache::lookup(const CacheKey& key) const {
  const auto path = record_path(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return label_set_from_json(nlohmann::json::parse(buf.str()));
  } catch (const nlohmann::json::exception& e) {
    throw CacheCorrupt("cache record " + path.string() + " is not valid JSON: " + e.what());
  } catch (const Error& e) {
    throw CacheCorrupt("cache record " + path.string() + " fails the label schema: " + e.what());
  }
}

void LabelCache::store(const CacheKey& key, const LabelSet& labels) {
  const auto final_path = record_path(key);
  std::ostringstream tmp_name;
  tmp_name << final_path.filename().string() << ".tmp." << ::getpid() << "." << std::hash<std::thread::id>{}(std::this_thread::get_id());
  const auto tmp_path = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    out << dump_label_set(labels) << '\n';
    if (!out) {
      throw ConfigError("cannot write cache record " + tmp_path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) {
    std::filesystem::remove(tmp_path, ec);
    throw ConfigError("cannot publish cache record " + final_path.string());
  }
}

std::mutex& LabelCache::stripe_for(const std::string& key_hex) {
  return stripes_[stable_hash(key_hex) % stripes_.size()];
}

LabelSet cached_label(LabelCache& cache, LabelProvider& provider, const LabelRequest& req) {
  const CacheKey key = cache_key(provider, req);
  std::lock_guard lock(cache.stripe_for(key.hex()));
  if (auto hit = cache.lookup(key)) {
    cache.hits_.fetch_add(1, std::memory_order_relaxed);
    return *std::move(hit);
  }
  cache.misses_.fetch_add(1, std::memory_order_relaxed);
  LabelSet fresh = provider.label(req);
  cache.store(key, fresh);
  return fresh;
}

}  // namespace rotguard::providers
