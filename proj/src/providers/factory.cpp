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

ProviderKind parse_provider_kind(std::string_view name) {
  if (name == "live") return ProviderKind::Live;
  if (name == "fixture") return ProviderKind::Fixture;
  if (name == "synthetic") return ProviderKind::Synthetic;
  throw ConfigError("unknown provider '" + std::string(name) + "' (expected live, fixture or synthetic)");
}

std::unique_ptr<LabelProvider> make_provider(const ProviderConfig& cfg) {
  switch (cfg.kind) {
    case ProviderKind::Live:
      return std::make_unique<VisionApiProvider>(cfg.vision);
    case ProviderKind::Fixture:
      if (cfg.fixture_dir.empty()) throw ConfigError("fixture provider needs a fixture directory");
      return std::make_unique<FixtureProvider>(cfg.fixture_dir, cfg.recorded_provider_id);
    case ProviderKind::Synthetic:
      return std::make_unique<SyntheticProvider>(cfg.seed, cfg.synthetic);
  }
  throw ConfigError("unknown provider kind");
}

}  // namespace rotguard::providers
