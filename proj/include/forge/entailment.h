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

// Binary support decisions E(review, proposition) from an NLI classifier.
//
// An Entailer consults a persistent verdict cache first and sends the misses
// to a backend in batches. Two backends exist: a remote classifier speaking
// the /v1/entail JSON protocol, and a deterministic lexical oracle used for
// tests and dry runs.

#ifndef FORGE_ENTAILMENT_H_
#define FORGE_ENTAILMENT_H_

#include <chrono>
#include <cstdint>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forge/hash.h"
#include "forge/text.h"

namespace forge {

enum class Label : uint8_t { kEntailment = 0, kNeutral = 1, kContradiction = 2 };

std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view name);

struct LabelProbs {
  double entailment = 0.0;
  double neutral = 0.0;
  double contradiction = 0.0;

  bool operator==(const LabelProbs &) const = default;
};

// What a classifier reports for one pair.
struct ClassifierOutput {
  Label label = Label::kNeutral;
  LabelProbs probs;

  bool operator==(const ClassifierOutput &) const = default;
};

struct EntailmentPair {
  std::string premise;     // a full review
  std::string hypothesis;  // a proposition

  Hash128 pair_key() const;
};

struct EntailmentVerdict {
  Label label = Label::kNeutral;
  LabelProbs probs;
  bool supported = false;

  bool operator==(const EntailmentVerdict &) const = default;
};

enum class BackendKind { kRemote, kLexical };

struct BackendConfig {
  BackendKind kind = BackendKind::kLexical;
  std::string endpoint;                   // remote only, e.g. http://localhost:8080
  std::optional<double> entail_threshold; // opt-in strictness on P(entailment)
  size_t batch_size = 32;
  std::optional<std::string> cache_path;  // in-memory cache when unset
  size_t max_in_flight = 4;               // concurrent batches per judge call
  size_t max_retries = 3;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::seconds timeout{60};

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

// supported = (label == entailment) and, if a threshold is set,
// P(entailment) >= threshold.
EntailmentVerdict decide(const ClassifierOutput &output, std::optional<double> threshold);

// Content words of the hypothesis are a non-empty subset of the premise's.
bool lexical_entails(std::string_view premise, std::string_view hypothesis,
                     const StopwordList &stopwords = StopwordList::english());

class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string &what, bool retryable)
      : std::runtime_error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// The backend answered, but the answer violates the wire contract.
class MalformedResponse : public BackendError {
 public:
  MalformedResponse(size_t pair_index, const std::string &why)
      : BackendError("malformed backend response at pair " + std::to_string(pair_index) + ": " +
                         why,
                     false),
        pair_index_(pair_index) {}
  size_t pair_index() const { return pair_index_; }

 private:
  size_t pair_index_;
};

class EntailmentBackend {
 public:
  virtual ~EntailmentBackend() = default;
  // One output per pair, order-aligned.
  virtual std::vector<ClassifierOutput> classify(std::span<const EntailmentPair> pairs) = 0;
  // Stable name that distinguishes backends in the verdict cache.
  virtual std::string identity() const = 0;
  // Whether concurrent batches are worth dispatching.
  virtual bool is_remote() const { return false; }
};

class LexicalBackend : public EntailmentBackend {
 public:
  explicit LexicalBackend(const StopwordList &stopwords = StopwordList::english())
      : stopwords_(stopwords) {}
  std::vector<ClassifierOutput> classify(std::span<const EntailmentPair> pairs) override;
  std::string identity() const override;

 private:
  const StopwordList &stopwords_;
};

class RemoteBackend : public EntailmentBackend {
 public:
  explicit RemoteBackend(const BackendConfig &cfg);
  std::vector<ClassifierOutput> classify(std::span<const EntailmentPair> pairs) override;
  std::string identity() const override { return "remote:" + endpoint_; }
  bool is_remote() const override { return true; }

 private:
  std::vector<ClassifierOutput> post_once(const std::string &body, size_t count);

  std::string endpoint_;
  std::string host_;  // scheme://host[:port]
  std::string path_;  // base path + /v1/entail
  size_t max_retries_;
  std::chrono::milliseconds initial_backoff_;
  std::chrono::seconds timeout_;
};

// Request body and response parsing for the /v1/entail protocol.
std::string encode_entail_request(std::span<const EntailmentPair> pairs);
std::vector<ClassifierOutput> decode_entail_response(std::string_view body, size_t expected);

// Verdict cache: an in-memory index over an append-only log.
//
// File layout: the 8-byte magic "FRGVCACH", a little-endian u32 version, then
// records of [u32 payload length][16-byte key][u8 label][3 x f64 probs].
// A torn final record left by a crash is truncated away on open.
class VerdictCache {
 public:
  VerdictCache() = default;  // memory only
  explicit VerdictCache(const std::string &path);

  std::optional<ClassifierOutput> lookup(const Hash128 &key) const;
  // Appends entries whose keys are not already present.
  void insert(std::span<const std::pair<Hash128, ClassifierOutput>> entries);
  size_t size() const;

  static constexpr uint32_t kVersion = 1;

 private:
  struct KeyHash {
    size_t operator()(const Hash128 &k) const;
  };

  mutable std::shared_mutex mu_;
  std::unordered_map<Hash128, ClassifierOutput, KeyHash> index_;
  std::ofstream log_;
  std::string path_;
};

struct JudgeResult {
  std::vector<EntailmentVerdict> verdicts;
  size_t cache_hits = 0;
  size_t judged = 0;  // pairs not served from the cache
};

class Entailer {
 public:
  explicit Entailer(BackendConfig cfg);
  Entailer(BackendConfig cfg, std::shared_ptr<EntailmentBackend> backend);

  // One verdict per pair, order-aligned. Safe to call concurrently.
  JudgeResult judge_batch(std::span<const EntailmentPair> pairs);

  const BackendConfig &config() const { return cfg_; }
  const EntailmentBackend &backend() const { return *backend_; }
  VerdictCache &cache() { return *cache_; }

  // Cache key over (premise, hypothesis, backend identity, threshold).
  Hash128 cache_key(const EntailmentPair &pair) const;

 private:
  BackendConfig cfg_;
  std::shared_ptr<EntailmentBackend> backend_;
  std::unique_ptr<VerdictCache> cache_;
};

std::vector<EntailmentVerdict> judge_batch(std::span<const EntailmentPair> pairs,
                                           const BackendConfig &cfg);

}  // namespace forge

#endif  // FORGE_ENTAILMENT_H_
