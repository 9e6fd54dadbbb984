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

// Source-side construction for silver pairs: provenance reviews of the
// selected propositions are removed, then k reviews are sampled from what
// remains.

#ifndef FORGE_SAMPLER_H_
#define FORGE_SAMPLER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "forge/consensus.h"
#include "forge/corpus.h"

namespace forge {

enum class SampleStrategy { kUniform, kEqual, kProportional };

std::string_view strategy_name(SampleStrategy s);
SampleStrategy parse_strategy(std::string_view name);

struct SampleConfig {
  SampleStrategy strategy = SampleStrategy::kUniform;
  size_t k = 160;
  uint64_t seed = 0;
};

struct SourceSet {
  std::vector<std::string> review_ids;
  SampleStrategy strategy_used = SampleStrategy::kUniform;
  // Per selected proposition, in summary order. Empty for uniform.
  std::vector<size_t> quotas;
  // The pool held fewer than k reviews and was returned whole.
  bool pool_exhausted = false;
};

// Reviews of the item that are not the source of any selected proposition,
// in item order.
std::vector<Review> remove_provenance(const Item &item, const SilverSummary &summary);

// Largest-remainder apportionment of k over the given weights. Ties in the
// remainder go to the earlier index. All-zero weights give all-zero quotas.
std::vector<size_t> largest_remainder_quotas(const std::vector<size_t> &weights, size_t k);

// support_sets[j] lists the pool reviews entailing summary.selected[j].
// Quota draws never repeat a review: a review that already filled a slot for
// an earlier proposition is skipped and the slot redrawn. Unfilled slots are
// backfilled uniformly from the rest of the pool. The result is shuffled.
// Throws std::invalid_argument on an empty pool or k == 0.
SourceSet sample_sources(const std::vector<Review> &pool, const SilverSummary &summary,
                         const std::vector<std::vector<std::string>> &support_sets,
                         const SampleConfig &cfg);

}  // namespace forge

#endif  // FORGE_SAMPLER_H_
