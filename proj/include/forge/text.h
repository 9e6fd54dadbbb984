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

// Whitespace tokenization, content words and UTF-8 hygiene shared by the
// propositionizer, the lexical entailment oracle, the redundancy filter and
// ROUGE scoring.

#ifndef FORGE_TEXT_H_
#define FORGE_TEXT_H_

#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace forge {

// Maximal runs of non-whitespace characters.
std::vector<std::string> whitespace_tokens(std::string_view text);

// Number of whitespace tokens without materializing them.
size_t count_tokens(std::string_view text);

// Collapses whitespace runs to a single space and trims both ends.
std::string normalize_ws(std::string_view text);

std::string trim(std::string_view text);

// ASCII-only lowercasing; multibyte UTF-8 sequences pass through unchanged.
std::string ascii_lower(std::string_view text);

// Returns the byte offset of the first invalid sequence, or npos when the
// whole buffer is well-formed UTF-8 (overlongs and surrogates rejected).
size_t find_invalid_utf8(std::string_view text);
inline bool is_valid_utf8(std::string_view text) {
  return find_invalid_utf8(text) == std::string_view::npos;
}

class StopwordList {
 public:
  // One word per line; blank lines ignored; words lowercased.
  static StopwordList parse(std::string_view contents);
  static StopwordList from_file(const std::string &path);

  // The list compiled in from data/stopwords_en.txt.
  static const StopwordList &english();

  bool contains(std::string_view word) const;
  size_t size() const { return words_.size(); }

  // Hex digest of the sorted word list, used in run fingerprints.
  const std::string &digest() const { return digest_; }

 private:
  std::unordered_set<std::string> words_;
  std::string digest_;
};

// Lowercased word tokens: ASCII characters other than letters, digits and
// apostrophes separate words; apostrophes at word edges are dropped.
std::vector<std::string> word_tokens(std::string_view text);

// word_tokens minus stopwords, as a set.
std::set<std::string> content_words(std::string_view text,
                                    const StopwordList &stopwords = StopwordList::english());

// Size of the intersection of the two content-word sets.
size_t overlap(std::string_view p, std::string_view q,
               const StopwordList &stopwords = StopwordList::english());

}  // namespace forge

#endif  // FORGE_TEXT_H_
