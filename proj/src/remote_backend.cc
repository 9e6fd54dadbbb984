// Copyright 2026 The Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "forge/entailment.h"

namespace forge {

using nlohmann::json;

namespace {

// Probabilities within this distance of the simplex are renormalized.
constexpr double kSimplexTolerance = 1e-4;

}  // namespace

std::string encode_entail_request(std::span<const EntailmentPair> pairs) {
  json arr = json::array();
  for (const auto &p : pairs) arr.push_back({{"premise", p.premise}, {"hypothesis", p.hypothesis}});
  return json{{"pairs", std::move(arr)}}.dump();
}

std::vector<ClassifierOutput> decode_entail_response(std::string_view body, size_t expected) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error &e) {
    throw MalformedResponse(0, std::string("unparseable body: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("results") || !doc["results"].is_array()) {
    throw MalformedResponse(0, "missing \"results\" array");
  }
  const auto &results = doc["results"];
  if (results.size() != expected) {
    throw MalformedResponse(std::min(results.size(), expected),
                            "expected " + std::to_string(expected) + " results, got " +
                                std::to_string(results.size()));
  }
  std::vector<ClassifierOutput> out;
  out.reserve(expected);
  for (size_t i = 0; i < results.size(); ++i) {
    const auto &r = results[i];
    if (!r.is_object()) throw MalformedResponse(i, "result is not an object");
    auto label_it = r.find("label");
    if (label_it == r.end() || !label_it->is_string()) {
      throw MalformedResponse(i, "missing label");
    }
    auto label = parse_label(label_it->get<std::string>());
    if (!label) throw MalformedResponse(i, "unknown label " + label_it->dump());
    auto probs_it = r.find("probs");
    if (probs_it == r.end() || !probs_it->is_object()) {
      throw MalformedResponse(i, "missing probs");
    }
    auto prob = [&](const char *name) {
      auto it = probs_it->find(name);
      if (it == probs_it->end() || !it->is_number()) {
        throw MalformedResponse(i, std::string("missing probability for ") + name);
      }
      const double v = it->get<double>();
      if (!std::isfinite(v) || v < 0.0) {
        throw MalformedResponse(i, std::string("invalid probability for ") + name);
      }
      return v;
    };
    LabelProbs p{prob("entailment"), prob("neutral"), prob("contradiction")};
    const double sum = p.entailment + p.neutral + p.contradiction;
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
      throw MalformedResponse(i, "probabilities sum to " + std::to_string(sum));
    }
    p.entailment /= sum;
    p.neutral /= sum;
    p.contradiction /= sum;
    out.push_back({*label, p});
  }
  return out;
}

RemoteBackend::RemoteBackend(const BackendConfig &cfg)
    : endpoint_(cfg.endpoint),
      max_retries_(cfg.max_retries),
      initial_backoff_(cfg.initial_backoff),
      timeout_(cfg.timeout) {
  std::string url = cfg.endpoint;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const size_t scheme = url.find("://");
  const size_t path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) {
    host_ = url;
  } else {
    host_ = url.substr(0, path_start);
    path_ = url.substr(path_start);
  }
  path_ += "/v1/entail";
}

std::vector<ClassifierOutput> RemoteBackend::post_once(const std::string &body, size_t count) {
  httplib::Client client(host_);
  if (!client.is_valid()) throw BackendError("invalid endpoint " + endpoint_, false);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  auto res = client.Post(path_, body, "application/json");
  if (!res) {
    throw BackendError("cannot reach " + endpoint_ + ": " + httplib::to_string(res.error()), true);
  }
  if (res->status == 200) return decode_entail_response(res->body, count);
  const bool retryable = res->status == 503 || res->status >= 500;
  throw BackendError("backend " + endpoint_ + " returned HTTP " + std::to_string(res->status),
                     retryable);
}

std::vector<ClassifierOutput> RemoteBackend::classify(std::span<const EntailmentPair> pairs) {
  if (pairs.empty()) return {};
  const std::string body = encode_entail_request(pairs);
  auto backoff = initial_backoff_;
  for (size_t attempt = 0;; ++attempt) {
    try {
      return post_once(body, pairs.size());
    } catch (const BackendError &e) {
      if (!e.retryable() || attempt >= max_retries_) throw;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

}  // namespace forge
