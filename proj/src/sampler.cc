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

#include "forge/sampler.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "forge/random.h"

namespace forge {

std::string_view strategy_name(SampleStrategy s) {
  switch (s) {
    case SampleStrategy::kUniform:
      return "uniform";
    case SampleStrategy::kEqual:
      return "equal";
    case SampleStrategy::kProportional:
      return "proportional";
  }
  return "uniform";
}

SampleStrategy parse_strategy(std::string_view name) {
  if (name == "uniform") return SampleStrategy::kUniform;
  if (name == "equal") return SampleStrategy::kEqual;
  if (name == "proportional") return SampleStrategy::kProportional;
  throw std::invalid_argument("unknown sampling strategy: " + std::string(name));
}

std::vector<Review> remove_provenance(const Item &item, const SilverSummary &summary) {
  std::unordered_set<std::string> provenance;
  for (const auto &s : summary.selected) provenance.insert(s.proposition.source_review_id);
  std::vector<Review> out;
  for (const auto &r : item.reviews) {
    if (!provenance.count(r.review_id)) out.push_back(r);
  }
  return out;
}

std::vector<size_t> largest_remainder_quotas(const std::vector<size_t> &weights, size_t k) {
  std::vector<size_t> quotas(weights.size(), 0);
  const size_t total = std::accumulate(weights.begin(), weights.end(), size_t{0});
  if (total == 0) return quotas;
  // Exact integer arithmetic: quota_j = floor(k * w_j / total), remainder
  // (k * w_j) mod total.
  std::vector<std::pair<unsigned __int128, size_t>> remainders;
  size_t assigned = 0;
  for (size_t j = 0; j < weights.size(); ++j) {
    const unsigned __int128 num = static_cast<unsigned __int128>(k) * weights[j];
    quotas[j] = static_cast<size_t>(num / total);
    assigned += quotas[j];
    remainders.emplace_back(num % total, j);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto &a, const auto &b) { return a.first > b.first; });
  for (size_t i = 0; assigned < k && i < remainders.size(); ++i, ++assigned) {
    ++quotas[remainders[i].second];
  }
  return quotas;
}

SourceSet sample_sources(const std::vector<Review> &pool, const SilverSummary &summary,
                         const std::vector<std::vector<std::string>> &support_sets,
                         const SampleConfig &cfg) {
  if (pool.empty()) throw std::invalid_argument("sample_sources: empty review pool");
  if (cfg.k == 0) throw std::invalid_argument("sample_sources: k must be >= 1");
  if (support_sets.size() != summary.selected.size()) {
    throw std::invalid_argument("sample_sources: one support set per selected proposition");
  }

  SourceSet out;
  out.strategy_used = cfg.strategy;
  Rng rng(cfg.seed);

  std::unordered_map<std::string, size_t> pool_index;
  for (size_t i = 0; i < pool.size(); ++i) pool_index.emplace(pool[i].review_id, i);

  std::vector<bool> taken(pool.size(), false);
  std::vector<size_t> picked;

  if (pool.size() <= cfg.k) {
    out.pool_exhausted = pool.size() < cfg.k;
    for (size_t i = 0; i < pool.size(); ++i) picked.push_back(i);
  } else {
    const size_t num_props = summary.selected.size();
    if (cfg.strategy != SampleStrategy::kUniform && num_props > 0) {
      if (cfg.strategy == SampleStrategy::kEqual) {
        out.quotas.assign(num_props, cfg.k / num_props);
      } else {
        std::vector<size_t> sizes;
        for (const auto &s : support_sets) sizes.push_back(s.size());
        out.quotas = largest_remainder_quotas(sizes, cfg.k);
      }
      for (size_t j = 0; j < num_props; ++j) {
        std::vector<size_t> candidates;
        for (const auto &id : support_sets[j]) {
          auto it = pool_index.find(id);
          if (it == pool_index.end()) {
            throw std::invalid_argument("sample_sources: support review " + id +
                                        " is not in the pool");
          }
          candidates.push_back(it->second);
        }
        rng.shuffle(std::span<size_t>(candidates));
        size_t filled = 0;
        for (size_t c : candidates) {
          if (filled == out.quotas[j]) break;
          if (taken[c]) continue;
          taken[c] = true;
          picked.push_back(c);
          ++filled;
        }
      }
    }
    // Backfill (all of uniform) from the untaken pool.
    std::vector<size_t> rest;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (!taken[i]) rest.push_back(i);
    }
    rng.shuffle(std::span<size_t>(rest));
    for (size_t i = 0; picked.size() < cfg.k && i < rest.size(); ++i) picked.push_back(rest[i]);
  }

  rng.shuffle(std::span<size_t>(picked));
  out.review_ids.reserve(picked.size());
  for (size_t i : picked) out.review_ids.push_back(pool[i].review_id);
  return out;
}

}  // namespace forge
