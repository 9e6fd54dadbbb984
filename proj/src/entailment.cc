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

#include "forge/entailment.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <future>
#include <map>

namespace forge {

std::string_view label_name(Label label) {
  switch (label) {
    case Label::kEntailment:
      return "entailment";
    case Label::kNeutral:
      return "neutral";
    case Label::kContradiction:
      return "contradiction";
  }
  return "neutral";
}

std::optional<Label> parse_label(std::string_view name) {
  if (name == "entailment") return Label::kEntailment;
  if (name == "neutral") return Label::kNeutral;
  if (name == "contradiction") return Label::kContradiction;
  return std::nullopt;
}

Hash128 EntailmentPair::pair_key() const { return hash_fields({premise, hypothesis}); }

void BackendConfig::validate() const {
  if (entail_threshold && !(*entail_threshold > 0.0 && *entail_threshold < 1.0)) {
    throw std::invalid_argument("entailment threshold must lie in (0, 1)");
  }
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (max_in_flight < 1) throw std::invalid_argument("max_in_flight must be >= 1");
  if (kind == BackendKind::kRemote && endpoint.empty()) {
    throw std::invalid_argument("remote backend requires an endpoint");
  }
}

EntailmentVerdict decide(const ClassifierOutput &output, std::optional<double> threshold) {
  EntailmentVerdict v{output.label, output.probs, false};
  v.supported = output.label == Label::kEntailment &&
                (!threshold || output.probs.entailment >= *threshold);
  return v;
}

bool lexical_entails(std::string_view premise, std::string_view hypothesis,
                     const StopwordList &stopwords) {
  const auto h = content_words(hypothesis, stopwords);
  if (h.empty()) return false;
  const auto p = content_words(premise, stopwords);
  return std::includes(p.begin(), p.end(), h.begin(), h.end());
}

std::vector<ClassifierOutput> LexicalBackend::classify(std::span<const EntailmentPair> pairs) {
  std::vector<ClassifierOutput> out;
  out.reserve(pairs.size());
  for (const auto &pair : pairs) {
    if (lexical_entails(pair.premise, pair.hypothesis, stopwords_)) {
      out.push_back({Label::kEntailment, {1.0, 0.0, 0.0}});
    } else {
      out.push_back({Label::kNeutral, {0.0, 1.0, 0.0}});
    }
  }
  return out;
}

std::string LexicalBackend::identity() const { return "lexical:" + stopwords_.digest(); }

// ---------------------------------------------------------------------------
// VerdictCache

namespace {

constexpr char kMagic[8] = {'F', 'R', 'G', 'V', 'C', 'A', 'C', 'H'};
constexpr uint32_t kPayloadSize = 16 + 1 + 3 * 8;

void put_u32(std::string &out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void put_u64(std::string &out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

uint64_t get_le(const unsigned char *p, int n) {
  uint64_t v = 0;
  for (int i = n - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

size_t VerdictCache::KeyHash::operator()(const Hash128 &k) const {
  size_t h;
  std::memcpy(&h, k.data(), sizeof(h));
  return h;
}

VerdictCache::VerdictCache(const std::string &path) : path_(path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const bool exists = fs::exists(path, ec) && fs::file_size(path, ec) > 0;
  if (exists) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open verdict cache: " + path);
    char header[12];
    if (!in.read(header, sizeof(header)) || std::memcmp(header, kMagic, 8) != 0) {
      throw std::runtime_error("not a verdict cache file: " + path);
    }
    const uint32_t version = static_cast<uint32_t>(
        get_le(reinterpret_cast<const unsigned char *>(header + 8), 4));
    if (version != kVersion) {
      throw std::runtime_error("unsupported verdict cache version " + std::to_string(version));
    }
    uint64_t good_end = sizeof(header);
    unsigned char rec[4 + kPayloadSize];
    while (in.read(reinterpret_cast<char *>(rec), 4)) {
      const uint32_t len = static_cast<uint32_t>(get_le(rec, 4));
      if (len != kPayloadSize) {
        throw std::runtime_error("corrupt verdict cache record at offset " +
                                 std::to_string(good_end));
      }
      if (!in.read(reinterpret_cast<char *>(rec + 4), kPayloadSize)) break;
      Hash128 key;
      std::memcpy(key.data(), rec + 4, 16);
      const uint8_t label = rec[20];
      if (label > 2) {
        throw std::runtime_error("corrupt verdict label at offset " + std::to_string(good_end));
      }
      ClassifierOutput out;
      out.label = static_cast<Label>(label);
      out.probs.entailment = std::bit_cast<double>(get_le(rec + 21, 8));
      out.probs.neutral = std::bit_cast<double>(get_le(rec + 29, 8));
      out.probs.contradiction = std::bit_cast<double>(get_le(rec + 37, 8));
      index_.emplace(key, out);
      good_end += 4 + kPayloadSize;
    }
    in.close();
    if (fs::file_size(path) != good_end) fs::resize_file(path, good_end);
    log_.open(path, std::ios::binary | std::ios::app);
  } else {
    log_.open(path, std::ios::binary | std::ios::trunc);
    std::string header(kMagic, sizeof(kMagic));
    put_u32(header, kVersion);
    log_.write(header.data(), static_cast<std::streamsize>(header.size()));
    log_.flush();
  }
  if (!log_) throw std::runtime_error("cannot write verdict cache: " + path);
}

std::optional<ClassifierOutput> VerdictCache::lookup(const Hash128 &key) const {
  std::shared_lock lock(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void VerdictCache::insert(std::span<const std::pair<Hash128, ClassifierOutput>> entries) {
  std::unique_lock lock(mu_);
  std::string buf;
  for (const auto &[key, out] : entries) {
    if (!index_.emplace(key, out).second) continue;
    if (!log_.is_open()) continue;
    put_u32(buf, kPayloadSize);
    buf.append(reinterpret_cast<const char *>(key.data()), key.size());
    buf.push_back(static_cast<char>(out.label));
    put_u64(buf, std::bit_cast<uint64_t>(out.probs.entailment));
    put_u64(buf, std::bit_cast<uint64_t>(out.probs.neutral));
    put_u64(buf, std::bit_cast<uint64_t>(out.probs.contradiction));
  }
  if (!buf.empty()) {
    log_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    log_.flush();
    if (!log_) throw std::runtime_error("verdict cache append failed: " + path_);
  }
}

size_t VerdictCache::size() const {
  std::shared_lock lock(mu_);
  return index_.size();
}

// ---------------------------------------------------------------------------
// Entailer

namespace {

std::shared_ptr<EntailmentBackend> make_backend(const BackendConfig &cfg) {
  cfg.validate();
  if (cfg.kind == BackendKind::kRemote) return std::make_shared<RemoteBackend>(cfg);
  return std::make_shared<LexicalBackend>();
}

}  // namespace

Entailer::Entailer(BackendConfig cfg) : Entailer(cfg, make_backend(cfg)) {}

Entailer::Entailer(BackendConfig cfg, std::shared_ptr<EntailmentBackend> backend)
    : cfg_(std::move(cfg)), backend_(std::move(backend)) {
  cfg_.validate();
  cache_ = cfg_.cache_path ? std::make_unique<VerdictCache>(*cfg_.cache_path)
                           : std::make_unique<VerdictCache>();
}

Hash128 Entailer::cache_key(const EntailmentPair &pair) const {
  Hasher h;
  h.add(pair.premise).add(pair.hypothesis).add(backend_->identity());
  if (cfg_.entail_threshold) {
    h.add(std::string_view("tau")).add(*cfg_.entail_threshold);
  } else {
    h.add(std::string_view("argmax"));
  }
  return h.finish();
}

JudgeResult Entailer::judge_batch(std::span<const EntailmentPair> pairs) {
  JudgeResult result;
  result.verdicts.resize(pairs.size());
  std::vector<ClassifierOutput> outputs(pairs.size());

  // Misses grouped by key so duplicate pairs reach the backend once.
  std::map<Hash128, std::vector<size_t>> misses;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const Hash128 key = cache_key(pairs[i]);
    if (auto hit = cache_->lookup(key)) {
      outputs[i] = *hit;
      ++result.cache_hits;
    } else {
      misses[key].push_back(i);
      ++result.judged;
    }
  }

  std::vector<const std::pair<const Hash128, std::vector<size_t>> *> unique;
  unique.reserve(misses.size());
  for (const auto &entry : misses) unique.push_back(&entry);
  // Keep first-occurrence order so backend batches are deterministic.
  std::sort(unique.begin(), unique.end(),
            [](const auto *a, const auto *b) { return a->second.front() < b->second.front(); });

  auto run_chunk = [&](size_t begin, size_t end) {
    std::vector<EntailmentPair> batch;
    batch.reserve(end - begin);
    for (size_t u = begin; u < end; ++u) batch.push_back(pairs[unique[u]->second.front()]);
    auto got = backend_->classify(batch);
    if (got.size() != batch.size()) {
      throw MalformedResponse(got.size(), "backend returned " + std::to_string(got.size()) +
                                              " results for " + std::to_string(batch.size()) +
                                              " pairs");
    }
    std::vector<std::pair<Hash128, ClassifierOutput>> fresh;
    fresh.reserve(got.size());
    for (size_t u = begin; u < end; ++u) {
      const auto &out = got[u - begin];
      for (size_t i : unique[u]->second) outputs[i] = out;
      fresh.emplace_back(unique[u]->first, out);
    }
    cache_->insert(fresh);
  };

  const size_t batch = cfg_.batch_size;
  const size_t chunks = (unique.size() + batch - 1) / batch;
  if (chunks <= 1 || !backend_->is_remote() || cfg_.max_in_flight == 1) {
    for (size_t c = 0; c < chunks; ++c) {
      run_chunk(c * batch, std::min(unique.size(), (c + 1) * batch));
    }
  } else {
    // Waves of at most max_in_flight concurrent batches. All futures are
    // drained before the first error is rethrown.
    for (size_t wave = 0; wave < chunks; wave += cfg_.max_in_flight) {
      std::vector<std::future<void>> inflight;
      for (size_t c = wave; c < std::min(chunks, wave + cfg_.max_in_flight); ++c) {
        inflight.push_back(std::async(std::launch::async, run_chunk, c * batch,
                                      std::min(unique.size(), (c + 1) * batch)));
      }
      std::exception_ptr first;
      for (auto &f : inflight) {
        try {
          f.get();
        } catch (...) {
          if (!first) first = std::current_exception();
        }
      }
      if (first) std::rethrow_exception(first);
    }
  }

  for (size_t i = 0; i < pairs.size(); ++i) {
    result.verdicts[i] = decide(outputs[i], cfg_.entail_threshold);
  }
  return result;
}

std::vector<EntailmentVerdict> judge_batch(std::span<const EntailmentPair> pairs,
                                           const BackendConfig &cfg) {
  Entailer entailer(cfg);
  return entailer.judge_batch(pairs).verdicts;
}

}  // namespace forge
