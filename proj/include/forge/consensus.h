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

// Consensus scoring of propositions and silver-summary assembly.
//
// The score of a proposition is the number of the item's reviews that
// entail it. The summary takes propositions in decreasing score order,
// skipping any that share max_overlap or more content words with an
// already-selected proposition, while the token budget allows.

#ifndef FORGE_CONSENSUS_H_
#define FORGE_CONSENSUS_H_

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "forge/corpus.h"
#include "forge/entailment.h"
#include "forge/propositionizer.h"
#include "forge/text.h"

namespace forge {

inline constexpr size_t kUnlimited = std::numeric_limits<size_t>::max();

struct ScoredProposition {
  Proposition proposition;
  size_t score = 0;
  std::vector<std::string> support;  // review ids in item order
  double support_fraction = 0.0;
};

struct SilverSummary {
  std::vector<ScoredProposition> selected;
  std::string text;
  size_t token_count = 0;  // whitespace tokens of the selected propositions
};

struct ScoreOutcome {
  std::vector<ScoredProposition> scored;
  size_t cache_hits = 0;
  size_t judged = 0;
};

// Judges every (review, proposition) pair of the item, own source review
// included, and counts supporting reviews per proposition.
ScoreOutcome score_item(const Item &item, const std::vector<Proposition> &props,
                        Entailer &entailer);

struct SelectionConfig {
  size_t token_budget = 75;
  size_t max_overlap = 2;       // kUnlimited disables the redundancy filter
  size_t pool_size = kUnlimited;  // top-n candidates considered
};

// Score order with ties broken by (review, sentence, span) position.
std::vector<size_t> rank_order(const std::vector<ScoredProposition> &scored);

SilverSummary select_summary(const std::vector<ScoredProposition> &scored,
                             const SelectionConfig &cfg,
                             const StopwordList &stopwords = StopwordList::english());

// Renders one proposition as a sentence: strips trailing commas and
// coordinating conjunctions, uppercases the first character and ensures
// terminal punctuation. Returns "" when nothing is left.
std::string polish_sentence(std::string_view proposition);

// Polished sentences joined by single spaces in selection order.
std::string polish(const std::vector<ScoredProposition> &selected);

}  // namespace forge

#endif  // FORGE_CONSENSUS_H_
