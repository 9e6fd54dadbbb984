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

// Reference implementations written independently of the library, used to
// cross-check it in unit and acceptance tests.

#ifndef FORGE_TESTS_ORACLES_H_
#define FORGE_TESTS_ORACLES_H_

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "forge/consensus.h"
#include "forge/corpus.h"
#include "forge/propositionizer.h"
#include "forge/text.h"

namespace forge::testing {

inline std::set<std::string> oracle_content_words(const std::string &text) {
  std::set<std::string> out;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && cur.front() == '\'') cur.erase(cur.begin());
    while (!cur.empty() && cur.back() == '\'') cur.pop_back();
    if (!cur.empty() && !StopwordList::english().contains(cur)) out.insert(cur);
    cur.clear();
  };
  for (unsigned char c : text) {
    if (c >= 0x80 || std::isalnum(c) || c == '\'') {
      cur.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

inline size_t oracle_overlap(const std::string &a, const std::string &b) {
  const auto x = oracle_content_words(a), y = oracle_content_words(b);
  std::vector<std::string> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
  return common.size();
}

inline bool oracle_entails(const std::string &premise, const std::string &hypothesis) {
  const auto h = oracle_content_words(hypothesis);
  if (h.empty()) return false;
  const auto p = oracle_content_words(premise);
  return std::includes(p.begin(), p.end(), h.begin(), h.end());
}

// scores[j] by looping over every review for every proposition.
inline std::vector<size_t> oracle_scores(const Item &item, const std::vector<Proposition> &props) {
  std::vector<size_t> scores(props.size(), 0);
  for (size_t j = 0; j < props.size(); ++j) {
    for (const auto &review : item.reviews) {
      if (oracle_entails(review.text, props[j].text)) ++scores[j];
    }
  }
  return scores;
}

// Step-by-step greedy: at each step scan every unselected candidate and take
// the best-ranked one that fits the budget and overlaps no selected one.
// Returns indices into `scored`.
inline std::vector<size_t> oracle_select(const std::vector<ScoredProposition> &scored,
                                         size_t budget, size_t max_overlap,
                                         size_t pool_size = kUnlimited) {
  auto better = [&](size_t a, size_t b) {
    const auto &pa = scored[a].proposition, &pb = scored[b].proposition;
    if (scored[a].score != scored[b].score) return scored[a].score > scored[b].score;
    return std::tie(pa.review_index, pa.sentence_index, pa.span_index) <
           std::tie(pb.review_index, pb.sentence_index, pb.span_index);
  };
  std::vector<size_t> pool;
  for (size_t i = 0; i < scored.size(); ++i) pool.push_back(i);
  // Pool membership: the pool_size best by rank.
  std::vector<size_t> ranked = pool;
  std::stable_sort(ranked.begin(), ranked.end(), better);
  if (ranked.size() > pool_size) ranked.resize(pool_size);
  std::set<size_t> eligible(ranked.begin(), ranked.end());

  std::vector<size_t> chosen;
  size_t used = 0;
  for (;;) {
    std::optional<size_t> best;
    for (size_t i : eligible) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      const size_t tokens = whitespace_tokens(scored[i].proposition.text).size();
      if (used + tokens > budget) continue;
      bool ok = true;
      for (size_t c : chosen) {
        if (oracle_overlap(scored[i].proposition.text, scored[c].proposition.text) >=
            max_overlap) {
          ok = false;
        }
      }
      if (!ok) continue;
      if (!best || better(i, *best)) best = i;
    }
    if (!best) break;
    chosen.push_back(*best);
    used += whitespace_tokens(scored[*best].proposition.text).size();
  }
  return chosen;
}

// Random candidates with distinct positions, so ranking is total.
template <typename Gen>
std::vector<ScoredProposition> random_candidates(Gen &gen, size_t max_count) {
  std::vector<ScoredProposition> out(1 + gen.pick(max_count));
  for (size_t i = 0; i < out.size(); ++i) {
    auto &p = out[i].proposition;
    p.text = gen.sentence(9);
    p.token_count = whitespace_tokens(p.text).size();
    p.review_index = gen.pick(4);
    p.sentence_index = gen.pick(3);
    p.span_index = i;
    p.source_review_id = "r" + std::to_string(p.review_index);
    out[i].score = gen.pick(6);
  }
  return out;
}

}  // namespace forge::testing

#endif  // FORGE_TESTS_ORACLES_H_
