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

#include "forge/propositionizer.h"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

#include "forge/text.h"

namespace forge {

namespace {

const std::unordered_set<std::string> &abbreviations() {
  static const std::unordered_set<std::string> kAbbrev = {
      "mr.",   "mrs.",  "ms.",   "dr.",   "prof.", "st.",   "sr.",   "jr.",  "approx.",
      "apt.",  "ave.",  "blvd.", "rd.",   "no.",   "nos.",  "vs.",   "e.g.", "i.e.",
      "a.m.",  "p.m.",  "min.",  "mins.", "hr.",   "hrs.",  "km.",   "mt.",  "ft.",
      "jan.",  "feb.",  "mar.",  "apr.",  "jun.",  "jul.",  "aug.",  "sep.", "sept.",
      "oct.",  "nov.",  "dec.",  "est.",  "inc.",  "ltd.",  "co.",   "dept.", "fig."};
  return kAbbrev;
}

bool is_closing(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opening(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

bool ends_sentence(std::string_view token) {
  size_t e = token.size();
  while (e > 0 && is_closing(token[e - 1])) --e;
  if (e == 0) return false;
  const char c = token[e - 1];
  return c == '.' || c == '!' || c == '?';
}

bool is_abbreviation(std::string_view token) {
  size_t b = 0;
  while (b < token.size() && is_opening(token[b])) ++b;
  const std::string word = ascii_lower(token.substr(b));
  if (abbreviations().count(word)) return true;
  // Single-letter initials such as "J."
  return word.size() == 2 && word[1] == '.' && std::isalpha(static_cast<unsigned char>(word[0]));
}

bool starts_sentence(std::string_view token) {
  size_t b = 0;
  while (b < token.size() && is_opening(token[b])) ++b;
  if (b == token.size()) return false;
  const char c = token[b];
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::string join(const std::vector<std::string> &tokens, size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

const std::vector<std::string> &coordinating_conjunctions() {
  static const std::vector<std::string> kConj = {"and", "but", "or", "nor", "so", "yet"};
  return kConj;
}

bool is_coordinating_conjunction(std::string_view token) {
  const std::string lower = ascii_lower(token);
  const auto &conj = coordinating_conjunctions();
  return std::find(conj.begin(), conj.end(), lower) != conj.end();
}

bool is_clause_delimiter(std::string_view token) {
  if (token.empty()) return false;
  const char last = token.back();
  return last == ',' || last == '.' || is_coordinating_conjunction(token);
}

std::vector<Sentence> split_sentences(const Review &review) {
  const auto tokens = whitespace_tokens(review.text);
  std::vector<Sentence> out;
  size_t start = 0;
  auto emit = [&](size_t end) {
    out.push_back({join(tokens, start, end), review.item_id, review.review_id, out.size()});
    start = end;
  };
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (ends_sentence(tokens[i]) && !is_abbreviation(tokens[i]) && starts_sentence(tokens[i + 1])) {
      emit(i + 1);
    }
  }
  if (start < tokens.size()) emit(tokens.size());
  return out;
}

std::vector<Proposition> split_propositions(const Sentence &sentence, size_t min_clause_len) {
  const auto tokens = whitespace_tokens(sentence.text);
  const size_t n = tokens.size();
  std::vector<Proposition> out;
  if (n == 0) return out;

  // A delimiter on the last token cannot open a new clause.
  std::vector<size_t> delims;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (is_clause_delimiter(tokens[i])) delims.push_back(i);
  }

  auto emit = [&](size_t begin, size_t end) {
    Proposition p;
    p.text = join(tokens, begin, end);
    p.source_item_id = sentence.item_id;
    p.source_review_id = sentence.review_id;
    p.sentence_index = sentence.index;
    p.span_index = out.size();
    p.token_count = end - begin;
    out.push_back(std::move(p));
  };

  size_t start = 0;
  for (size_t k = 0; k < delims.size(); ++k) {
    const size_t d = delims[k];
    const size_t next_end = k + 1 < delims.size() ? delims[k + 1] : n - 1;
    const size_t left_len = d + 1 - start;
    const size_t right_len = next_end - d;
    if (left_len >= min_clause_len && right_len >= min_clause_len) {
      emit(start, d + 1);
      start = d + 1;
    }
  }
  emit(start, n);
  return out;
}

std::vector<Proposition> extract_all(const Item &item, size_t min_clause_len) {
  std::vector<Proposition> out;
  for (size_t r = 0; r < item.reviews.size(); ++r) {
    for (const auto &sentence : split_sentences(item.reviews[r])) {
      for (auto &p : split_propositions(sentence, min_clause_len)) {
        p.review_index = r;
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

void dump_propositions(const std::vector<Proposition> &props, std::ostream &out) {
  for (const auto &p : props) {
    out << nlohmann::json{{"item_id", p.source_item_id},
                          {"review_id", p.source_review_id},
                          {"sentence_index", p.sentence_index},
                          {"span_index", p.span_index},
                          {"text", p.text}}
               .dump()
        << '\n';
  }
}

}  // namespace forge
