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

#include <stdexcept>
#include <string>

namespace rotguard {

/// Coarse failure class; the CLI maps it onto its exit-code contract.
enum class ErrorClass {
  Computation,  // bad data or a degenerate input
  Io,           // files, codecs, model artifacts, usage
  Auth,         // credentials rejected or quota exhausted
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

#define ROTGUARD_DEFINE_ERROR(Name, Cls)                                    \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorClass::Cls, what) {} \
  }

// imaging
ROTGUARD_DEFINE_ERROR(InvalidImage, Computation);
ROTGUARD_DEFINE_ERROR(AllBlack, Computation);
ROTGUARD_DEFINE_ERROR(DegenerateImage, Computation);
ROTGUARD_DEFINE_ERROR(ImageIoError, Io);

// metric
ROTGUARD_DEFINE_ERROR(EmptyBaseline, Computation);
ROTGUARD_DEFINE_ERROR(InvalidScore, Computation);
ROTGUARD_DEFINE_ERROR(InvalidLabelSet, Computation);

// providers
ROTGUARD_DEFINE_ERROR(AuthError, Auth);
ROTGUARD_DEFINE_ERROR(QuotaError, Auth);
ROTGUARD_DEFINE_ERROR(TransportError, Io);
ROTGUARD_DEFINE_ERROR(ProviderError, Computation);
ROTGUARD_DEFINE_ERROR(FixtureMiss, Io);
ROTGUARD_DEFINE_ERROR(CacheCorrupt, Io);

// predictors
ROTGUARD_DEFINE_ERROR(ModelLoadError, Io);
ROTGUARD_DEFINE_ERROR(ShapeError, Computation);
ROTGUARD_DEFINE_ERROR(OracleMiss, Computation);

// sweep / config
ROTGUARD_DEFINE_ERROR(EmptyCorpus, Io);
ROTGUARD_DEFINE_ERROR(ConfigError, Io);

#undef ROTGUARD_DEFINE_ERROR

}  // namespace rotguard
