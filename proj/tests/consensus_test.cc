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

#include <gtest/gtest.h>

#include "forge/consensus.h"
#include "oracles.h"
#include "test_util.h"

namespace forge {
namespace {

using testing::make_item;
using testing::TextGen;

ScoredProposition scored(const std::string &text, size_t score, size_t review_index = 0,
                         size_t span_index = 0) {
  ScoredProposition s;
  s.proposition.text = text;
  s.proposition.token_count = count_tokens(text);
  s.proposition.review_index = review_index;
  s.proposition.span_index = span_index;
  s.proposition.source_review_id = "r" + std::to_string(review_index);
  s.score = score;
  return s;
}

std::vector<std::string> texts(const SilverSummary &s) {
  std::vector<std::string> out;
  for (const auto &p : s.selected) out.push_back(p.proposition.text);
  return out;
}

TEST(ScoreItemTest, UnanimousSupport) {
  const Item item = make_item("h", {"Clean rooms here.", "The clean rooms, wow.",
                                    "Clean rooms and a pool.", "Rooms: clean!"});
  Entailer entailer{BackendConfig{}};
  Proposition p;
  p.text = "clean rooms";
  const auto out = score_item(item, {p}, entailer);
  ASSERT_EQ(out.scored.size(), 1u);
  EXPECT_EQ(out.scored[0].score, 4u);
  EXPECT_EQ(out.scored[0].support, (std::vector<std::string>{"r0", "r1", "r2", "r3"}));
  EXPECT_DOUBLE_EQ(out.scored[0].support_fraction, 1.0);
  EXPECT_EQ(out.judged + out.cache_hits, 4u);
}

TEST(ScoreItemTest, SelfSupportOnly) {
  const Item item = make_item("h", {"The breakfast buffet was superb.", "Rooms were tiny.",
                                    "Staff could be friendlier."});
  Entailer entailer{BackendConfig{}};
  const auto props = extract_all(item);
  const auto out = score_item(item, props, entailer);
  ASSERT_EQ(out.scored.size(), 3u);
  for (const auto &s : out.scored) {
    EXPECT_EQ(s.score, 1u) << s.proposition.text;
    EXPECT_EQ(s.support, std::vector<std::string>{s.proposition.source_review_id});
  }
}

TEST(ScoreItemTest, MatchesBruteForce) {
  TextGen gen(21);
  Entailer entailer{BackendConfig{}};
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<std::string> reviews(1 + gen.pick(10));
    for (auto &r : reviews) r = gen.review();
    const Item item = make_item("item" + std::to_string(trial), reviews);
    auto props = extract_all(item, 2);
    if (props.size() > 30) props.resize(30);
    const auto out = score_item(item, props, entailer);
    const auto expect = testing::oracle_scores(item, props);
    ASSERT_EQ(out.scored.size(), props.size());
    for (size_t j = 0; j < props.size(); ++j) {
      EXPECT_EQ(out.scored[j].score, expect[j]);
      EXPECT_EQ(out.scored[j].score, out.scored[j].support.size());
      EXPECT_LE(out.scored[j].support_fraction, 1.0);
      EXPECT_GE(out.scored[j].support_fraction, 0.0);
    }
    EXPECT_EQ(out.judged + out.cache_hits, item.reviews.size() * props.size());
  }
}

TEST(ScoreItemTest, EmptyInputs) {
  Entailer entailer{BackendConfig{}};
  const Item item = make_item("h", {"A review."});
  EXPECT_TRUE(score_item(item, {}, entailer).scored.empty());
}

TEST(RankOrderTest, ScoreThenPosition) {
  std::vector<ScoredProposition> v = {scored("a", 2, 1, 0), scored("b", 3, 2, 0),
                                      scored("c", 2, 0, 1), scored("d", 2, 0, 0)};
  EXPECT_EQ(rank_order(v), (std::vector<size_t>{1, 3, 2, 0}));
}

TEST(SelectSummaryTest, OverlapRejectsNearDuplicate) {
  const std::vector<ScoredProposition> v = {scored("clean large rooms", 9, 1),
                                            scored("rooms were clean and large", 10, 0)};
  const auto s = select_summary(v, SelectionConfig{});
  EXPECT_EQ(texts(s), std::vector<std::string>{"rooms were clean and large"});
  EXPECT_EQ(s.token_count, 5u);
  EXPECT_EQ(s.text, "Rooms were clean and large.");
}

TEST(SelectSummaryTest, OverlapOfOneIsAllowed) {
  const std::vector<ScoredProposition> v = {scored("the rooms were clean", 3, 0),
                                            scored("rooms had a view", 2, 1)};
  EXPECT_EQ(select_summary(v, SelectionConfig{}).selected.size(), 2u);
}

TEST(SelectSummaryTest, BudgetSkipsLongButKeepsShorter) {
  const std::vector<ScoredProposition> v = {scored("great pool", 5, 0),
                                            scored("one two three four five six", 4, 1),
                                            scored("quiet street", 3, 2)};
  SelectionConfig cfg;
  cfg.token_budget = 5;
  const auto s = select_summary(v, cfg);
  EXPECT_EQ(texts(s), (std::vector<std::string>{"great pool", "quiet street"}));
  EXPECT_EQ(s.token_count, 4u);
  cfg.token_budget = 1;
  EXPECT_TRUE(select_summary(v, cfg).selected.empty());
}

TEST(SelectSummaryTest, UnlimitedIsScoreOrder) {
  TextGen gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = testing::random_candidates(gen, 10);
    SelectionConfig cfg{kUnlimited, kUnlimited, kUnlimited};
    const auto s = select_summary(v, cfg);
    const auto order = rank_order(v);
    ASSERT_EQ(s.selected.size(), v.size());
    for (size_t i = 0; i < order.size(); ++i) {
      EXPECT_EQ(s.selected[i].proposition, v[order[i]].proposition);
    }
  }
}

TEST(SelectSummaryTest, MatchesStepwiseReference) {
  TextGen gen(13);
  for (int trial = 0; trial < 600; ++trial) {
    const auto v = testing::random_candidates(gen, 10);
    SelectionConfig cfg;
    cfg.token_budget = 3 + gen.pick(30);
    cfg.max_overlap = 1 + gen.pick(3);
    if (gen.pick(4) == 0) cfg.pool_size = 1 + gen.pick(6);
    const auto s = select_summary(v, cfg);
    const auto expect =
        testing::oracle_select(v, cfg.token_budget, cfg.max_overlap, cfg.pool_size);
    ASSERT_EQ(s.selected.size(), expect.size()) << "trial " << trial;
    size_t tokens = 0;
    for (size_t i = 0; i < expect.size(); ++i) {
      EXPECT_EQ(s.selected[i].proposition, v[expect[i]].proposition);
      tokens += v[expect[i]].proposition.token_count;
      if (i > 0) {
        EXPECT_GE(s.selected[i - 1].score, s.selected[i].score);
      }
      for (size_t j = 0; j < i; ++j) {
        EXPECT_LT(overlap(s.selected[i].proposition.text, s.selected[j].proposition.text),
                  cfg.max_overlap);
      }
    }
    EXPECT_EQ(s.token_count, tokens);
    EXPECT_LE(s.token_count, cfg.token_budget);
  }
}

TEST(SelectSummaryTest, FilterShrinksTopTenPool) {
  // Ten candidates, several restating the same facts.
  const std::vector<std::string> phrases = {
      "the rooms were very clean",     "very clean rooms",          "friendly and helpful staff",
      "the staff were very friendly",  "great location near metro", "location is great",
      "breakfast was good",            "good breakfast every day",  "comfortable beds",
      "the beds were very comfortable"};
  std::vector<ScoredProposition> v;
  const size_t n = 40;
  for (size_t i = 0; i < phrases.size(); ++i) {
    auto s = scored(phrases[i], 30 - 2 * i, i);
    s.support_fraction = static_cast<double>(s.score) / n;
    v.push_back(s);
  }
  SelectionConfig cfg;
  cfg.pool_size = 10;
  cfg.token_budget = kUnlimited;
  const auto s = select_summary(v, cfg);
  EXPECT_LT(s.selected.size(), 10u);
  EXPECT_EQ(s.selected.size(), 5u);
  for (size_t i = 0; i < s.selected.size(); ++i) {
    EXPECT_GE(s.selected[i].support_fraction, 0.0);
    EXPECT_LE(s.selected[i].support_fraction, 1.0);
    if (i > 0) {
      EXPECT_GE(s.selected[i - 1].support_fraction, s.selected[i].support_fraction);
    }
  }
}

TEST(PolishTest, Examples) {
  EXPECT_EQ(polish_sentence("the rooms were very comfortable, and"),
            "The rooms were very comfortable.");
  EXPECT_EQ(polish_sentence("well maintained, clean, comfortable suites,"),
            "Well maintained, clean, comfortable suites.");
  EXPECT_EQ(polish_sentence("Was it worth it?"), "Was it worth it?");
  EXPECT_EQ(polish_sentence("loved it!"), "Loved it!");
  EXPECT_EQ(polish_sentence("quiet, but"), "Quiet.");
  EXPECT_EQ(polish_sentence(", and"), "");
  EXPECT_EQ(polish_sentence("élan vital"), "élan vital.");
  EXPECT_EQ(polish({}), "");
  EXPECT_EQ(polish({scored("rooms were clean,", 1), scored("and", 1), scored("staff, so", 1)}),
            "Rooms were clean. Staff.");
}

}  // namespace
}  // namespace forge
