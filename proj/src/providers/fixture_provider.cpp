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


#include "rotguard/errors.hpp"
#include "rotguard/providers.hpp"

namespace rotguard::providers {

FixtureProvider::FixtureProvider(std::filesystem::path dir, std::string recorded_provider_id)
    : store_(std::move(dir)), recorded_id_(std::move(recorded_provider_id)) {}

LabelSet FixtureProvider::label(const LabelRequest& req) {
  const CacheKey key = cache_key(*this, req);
  auto hit = store_.lookup(key);
  if (!hit) {
    throw FixtureMiss("no fixture for image " + req.image_sha256 + " (expected " + store_.record_path(key).string() +
                      ")");
  }
  return hit->truncated(static_cast<std::size_t>(req.max_results));
}

}  // namespace rotguard::providers
