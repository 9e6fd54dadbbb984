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

// Rule-based segmentation of reviews into sentences and of sentences into
// propositions: contiguous clauses cut at coordinating conjunctions, commas
// and periods, subject to a minimum clause length in whitespace tokens.

#ifndef FORGE_PROPOSITIONIZER_H_
#define FORGE_PROPOSITIONIZER_H_

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "forge/corpus.h"

namespace forge {

inline constexpr size_t kDefaultMinClauseLen = 4;

struct Sentence {
  std::string text;  // whitespace-normalized
  std::string item_id;
  std::string review_id;
  size_t index = 0;  // position within the review
};

struct Proposition {
  std::string text;
  std::string source_item_id;
  std::string source_review_id;
  size_t review_index = 0;  // position of the source review within its item
  size_t sentence_index = 0;
  size_t span_index = 0;
  size_t token_count = 0;

  bool operator==(const Proposition &) const = default;
};

// Conjunctions that act as split points, matched as whole lowercase tokens.
const std::vector<std::string> &coordinating_conjunctions();
bool is_coordinating_conjunction(std::string_view token);

// A token ends a candidate clause if it is a coordinating conjunction or
// ends in a comma or period.
bool is_clause_delimiter(std::string_view token);

// Splits at '.', '!' or '?' (optionally followed by closing quotes or
// brackets) when the next token starts with an uppercase letter or digit and
// the token is not a known abbreviation.
std::vector<Sentence> split_sentences(const Review &review);

// Greedy left-to-right segmentation. A cut after a delimiter is taken only if
// the clause it closes and the span up to the next delimiter (or the end)
// both have at least min_clause_len tokens; otherwise the span stays attached
// to the clause on its left. Delimiters stay with the left clause.
std::vector<Proposition> split_propositions(const Sentence &sentence,
                                            size_t min_clause_len = kDefaultMinClauseLen);

// All propositions of an item in review, sentence, span order.
std::vector<Proposition> extract_all(const Item &item,
                                     size_t min_clause_len = kDefaultMinClauseLen);

// Debug dump, one JSON object per line.
void dump_propositions(const std::vector<Proposition> &props, std::ostream &out);

}  // namespace forge

#endif  // FORGE_PROPOSITIONIZER_H_
