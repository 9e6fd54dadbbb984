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

#include "forge/consensus.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

namespace forge {

namespace {

// Review rows are judged together until a chunk reaches this many pairs.
constexpr size_t kPairsPerChunk = 4096;

}  // namespace

ScoreOutcome score_item(const Item &item, const std::vector<Proposition> &props,
                        Entailer &entailer) {
  ScoreOutcome out;
  const size_t n = item.reviews.size();
  const size_t m = props.size();
  out.scored.resize(m);
  for (size_t j = 0; j < m; ++j) out.scored[j].proposition = props[j];
  if (n == 0 || m == 0) return out;

  std::vector<std::vector<bool>> supported(m, std::vector<bool>(n, false));
  std::vector<EntailmentPair> pairs;
  size_t row_begin = 0;
  auto flush = [&](size_t row_end) {
    if (pairs.empty()) return;
    auto res = entailer.judge_batch(pairs);
    out.cache_hits += res.cache_hits;
    out.judged += res.judged;
    for (size_t r = row_begin; r < row_end; ++r) {
      for (size_t j = 0; j < m; ++j) {
        supported[j][r] = res.verdicts[(r - row_begin) * m + j].supported;
      }
    }
    pairs.clear();
    row_begin = row_end;
  };
  for (size_t r = 0; r < n; ++r) {
    for (const auto &p : props) pairs.push_back({item.reviews[r].text, p.text});
    if (pairs.size() >= kPairsPerChunk) flush(r + 1);
  }
  flush(n);

  for (size_t j = 0; j < m; ++j) {
    auto &s = out.scored[j];
    for (size_t r = 0; r < n; ++r) {
      if (supported[j][r]) s.support.push_back(item.reviews[r].review_id);
    }
    s.score = s.support.size();
    s.support_fraction = static_cast<double>(s.score) / static_cast<double>(n);
  }
  return out;
}

std::vector<size_t> rank_order(const std::vector<ScoredProposition> &scored) {
  std::vector<size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  auto position = [&](size_t i) {
    const auto &p = scored[i].proposition;
    return std::make_tuple(p.review_index, p.sentence_index, p.span_index);
  };
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scored[a].score != scored[b].score) return scored[a].score > scored[b].score;
    return position(a) < position(b);
  });
  return order;
}

SilverSummary select_summary(const std::vector<ScoredProposition> &scored,
                             const SelectionConfig &cfg, const StopwordList &stopwords) {
  SilverSummary summary;
  auto order = rank_order(scored);
  if (order.size() > cfg.pool_size) order.resize(cfg.pool_size);

  // One pass suffices: overlap rejections are permanent because the selected
  // set only grows, and a candidate over budget stays over budget.
  std::vector<std::set<std::string>> chosen_words;
  for (size_t idx : order) {
    const auto &cand = scored[idx];
    const size_t tokens = cand.proposition.token_count;
    if (tokens > cfg.token_budget - summary.token_count) continue;
    const auto words = content_words(cand.proposition.text, stopwords);
    bool redundant = false;
    if (cfg.max_overlap != kUnlimited) {
      for (const auto &other : chosen_words) {
        size_t shared = 0;
        for (const auto &w : words) shared += other.count(w);
        if (shared >= cfg.max_overlap) {
          redundant = true;
          break;
        }
      }
    }
    if (redundant) continue;
    summary.selected.push_back(cand);
    summary.token_count += tokens;
    chosen_words.push_back(words);
  }
  summary.text = polish(summary.selected);
  return summary;
}

std::string polish_sentence(std::string_view proposition) {
  auto tokens = whitespace_tokens(proposition);
  for (bool changed = true; changed && !tokens.empty();) {
    changed = false;
    auto &last = tokens.back();
    while (!last.empty() && last.back() == ',') {
      last.pop_back();
      changed = true;
    }
    if (last.empty() || is_coordinating_conjunction(last)) {
      tokens.pop_back();
      changed = true;
    }
  }
  if (tokens.empty()) return {};
  std::string out;
  for (const auto &t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  if (out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  const char end = out.back();
  if (end != '.' && end != '!' && end != '?') out.push_back('.');
  return out;
}

std::string polish(const std::vector<ScoredProposition> &selected) {
  std::string out;
  for (const auto &s : selected) {
    const std::string sentence = polish_sentence(s.proposition.text);
    if (sentence.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += sentence;
  }
  return out;
}

}  // namespace forge
