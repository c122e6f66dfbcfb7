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


#include <httplib.h>

#include <cctype>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <thread>

#include "rotguard/digest.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/providers.hpp"

namespace rotguard::providers {

namespace {

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0x0f]);
    }
  }
  return out;
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

// Google's error envelope: {"error": {"code": N, "message": ..., "status": ...}}.
// `code` may be an HTTP status or a google.rpc.Code.
[[noreturn]] void throw_api_error(const nlohmann::json& err, int http_status) {
  const int code = err.value("code", http_status);
  const std::string status = err.value("status", std::string());
  const std::string message = err.value("message", std::string("unknown error"));
  const std::string what = "Cloud Vision error " + std::to_string(code) + " " + status + ": " + message;

  if (status == "RESOURCE_EXHAUSTED" || code == 8 || code == 429 || http_status == 429) {
    throw QuotaError(what);
  }
  if (status == "UNAUTHENTICATED" || status == "PERMISSION_DENIED" || code == 16 || code == 7 || code == 401 ||
      code == 403 || message.find("API key") != std::string::npos) {
    throw AuthError(what);
  }
  throw ProviderError(what);
}

}  // namespace

VisionApiOptions VisionApiOptions::from_environment() {
  VisionApiOptions o;
  o.api_key = env_or_empty("GOOGLE_API_KEY");
  o.bearer_token = env_or_empty("GOOGLE_ACCESS_TOKEN");
  return o;
}

std::string build_annotate_request(const LabelRequest& req) {
  nlohmann::json body = {
      {"requests",
       nlohmann::json::array({{{"image", {{"content", base64_encode(req.png)}}},
                               {"features", nlohmann::json::array(
                                                {{{"type", "LABEL_DETECTION"}, {"maxResults", req.max_results}}})}}})}};
  return body.dump();
}

LabelSet parse_annotate_response(std::string_view body, int max_results) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("malformed Cloud Vision response: ") + e.what());
  }
  if (doc.contains("error")) {
    throw_api_error(doc.at("error"), 200);
  }
  if (!doc.contains("responses") || !doc.at("responses").is_array() || doc.at("responses").empty()) {
    throw ProviderError("Cloud Vision response has no responses[0]");
  }
  const auto& first = doc.at("responses").at(0);
  if (first.contains("error")) {
    throw_api_error(first.at("error"), 200);
  }

  std::vector<std::pair<std::string, double>> raw;
  if (first.contains("labelAnnotations")) {
    for (const auto& a : first.at("labelAnnotations")) {
      if (!a.contains("description") || !a.at("description").is_string() || !a.contains("score") ||
          !a.at("score").is_number()) {
        throw ProviderError("label annotation without description/score");
      }
      raw.emplace_back(a.at("description").get<std::string>(), a.at("score").get<double>());
    }
  }
  return normalize_labels(raw).truncated(static_cast<std::size_t>(max_results));
}

// Caps concurrent requests and requests per rolling minute.
class VisionApiProvider::Limiter {
 public:
  Limiter(int max_in_flight, int per_minute) : max_in_flight_(std::max(1, max_in_flight)), per_minute_(per_minute) {}

  void acquire() {
    using clock = std::chrono::steady_clock;
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
    ++in_flight_;
    if (per_minute_ > 0) {
      for (;;) {
        const auto now = clock::now();
        while (!window_.empty() && now - window_.front() >= std::chrono::minutes(1)) window_.pop_front();
        if (static_cast<int>(window_.size()) < per_minute_) break;
        cv_.wait_until(lock, window_.front() + std::chrono::minutes(1));
      }
      window_.push_back(clock::now());
    }
  }

  void release() {
    {
      std::lock_guard lock(mu_);
      --in_flight_;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  int max_in_flight_;
  int per_minute_;
  std::deque<std::chrono::steady_clock::time_point> window_;
};

VisionApiProvider::VisionApiProvider(VisionApiOptions options)
    : options_(std::move(options)),
      limiter_(std::make_unique<Limiter>(options_.max_in_flight, options_.requests_per_minute)) {
  if (options_.api_key.empty() && options_.bearer_token.empty()) {
    throw AuthError("no Cloud Vision credentials: set GOOGLE_API_KEY or GOOGLE_ACCESS_TOKEN");
  }
}

VisionApiProvider::~VisionApiProvider() = default;

LabelSet VisionApiProvider::label(const LabelRequest& req) {
  const std::string body = build_annotate_request(req);
  std::string path = options_.path;
  if (!options_.api_key.empty()) {
    path += "?key=" + url_encode(options_.api_key);
  }
  httplib::Headers headers;
  if (!options_.bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.bearer_token);
  }

  std::string last_failure;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(options_.backoff_base * (1 << (attempt - 1)));
    }

    httplib::Result res;
    {
      limiter_->acquire();
      struct Release {
        Limiter* l;
        ~Release() { l->release(); }
      } release{limiter_.get()};

      httplib::Client client(options_.endpoint);
      client.set_connection_timeout(options_.timeout);
      client.set_read_timeout(options_.timeout);
      client.set_write_timeout(options_.timeout);
      res = client.Post(path, headers, body, "application/json");
    }

    if (!res) {
      last_failure = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    const int status = res->status;
    if (status >= 500) {
      last_failure = "server error " + std::to_string(status);
      continue;
    }
    if (status != 200) {
      nlohmann::json err = {{"code", status}, {"message", res->body}};
      try {
        auto doc = nlohmann::json::parse(res->body);
        if (doc.contains("error") && doc.at("error").is_object()) err = doc.at("error");
      } catch (const nlohmann::json::exception&) {
      }
      throw_api_error(err, status);
    }
    return parse_annotate_response(res->body, req.max_results);
  }
  throw TransportError("Cloud Vision request failed after " + std::to_string(options_.max_retries + 1) +
                       " attempts: " + last_failure);
}

}  // namespace rotguard::providers
