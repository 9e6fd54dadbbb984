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

#include <set>

#include "forge/corpus.h"
#include "forge/evalkit.h"
#include "test_util.h"

namespace forge {
namespace {

using testing::ScratchDir;
using testing::write_file;

void expect_prf(const PRF &got, double p, double r, double f) {
  EXPECT_NEAR(got.precision, p, 1e-9);
  EXPECT_NEAR(got.recall, r, 1e-9);
  EXPECT_NEAR(got.f1, f, 1e-9);
}

TEST(RougeTest, Tokens) {
  EXPECT_EQ(rouge_tokens("The staff's 2nd-floor room!"),
            (std::vector<std::string>{"the", "staff", "s", "2nd", "floor", "room"}));
  EXPECT_EQ(rouge_tokens("Running rooms", true), (std::vector<std::string>{"run", "room"}));
  EXPECT_EQ(rouge_tokens("was", true), std::vector<std::string>{"was"});
  EXPECT_TRUE(rouge_tokens(" ... ").empty());
}

TEST(RougeTest, Identity) {
  const auto s = rouge("The rooms were clean and the staff friendly.",
                       {"The rooms were clean and the staff friendly."});
  expect_prf(s.r1, 1, 1, 1);
  expect_prf(s.r2, 1, 1, 1);
  expect_prf(s.rl, 1, 1, 1);
}

TEST(RougeTest, Disjoint) {
  const auto s = rouge("great pool", {"terrible breakfast"});
  expect_prf(s.r1, 0, 0, 0);
  expect_prf(s.r2, 0, 0, 0);
  expect_prf(s.rl, 0, 0, 0);
  const auto e = rouge("", {"terrible breakfast"});
  expect_prf(e.r1, 0, 0, 0);
  EXPECT_THROW(rouge("x", {}), std::invalid_argument);
}

TEST(RougeTest, UnigramExample) {
  const auto s = rouge("the staff were friendly", {"staff were very friendly"});
  expect_prf(s.r1, 0.75, 0.75, 0.75);
  // Bigrams: "staff were" is the only shared one of three each.
  expect_prf(s.r2, 1.0 / 3, 1.0 / 3, 1.0 / 3);
  expect_prf(s.rl, 0.75, 0.75, 0.75);
}

TEST(RougeTest, ClippedCounts) {
  expect_prf(rouge_n({"a", "a", "a"}, {"a", "b"}, 1), 1.0 / 3, 0.5, 0.4);
  expect_prf(rouge_l({"a", "b", "c", "d"}, {"a", "c", "x", "d"}), 0.75, 0.75, 0.75);
  EXPECT_DOUBLE_EQ(f_measure(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(f_measure(1, 0.5), 2.0 / 3);
}

TEST(RougeTest, MaxAndMeanAggregation) {
  const std::vector<std::string> refs = {"staff were very friendly", "the staff were friendly"};
  const auto mx = rouge("the staff were friendly", refs);
  expect_prf(mx.r1, 1, 1, 1);
  RougeOptions mean;
  mean.aggregation = RefAggregation::kMean;
  const auto mn = rouge("the staff were friendly", refs, mean);
  expect_prf(mn.r1, 0.875, 0.875, 0.875);
}

TEST(RougeTest, Properties) {
  testing::TextGen gen(31);
  for (int i = 0; i < 1000; ++i) {
    const std::string cand = gen.sentence(15);
    std::vector<std::string> refs = {gen.sentence(15)};
    const auto s = rouge(cand, refs);
    for (const PRF *m : {&s.r1, &s.r2, &s.rl}) {
      EXPECT_GE(m->precision, 0.0);
      EXPECT_LE(m->precision, 1.0);
      EXPECT_GE(m->recall, 0.0);
      EXPECT_LE(m->recall, 1.0);
      EXPECT_LE(m->f1, std::max(m->precision, m->recall) + 1e-12);
    }
    EXPECT_LE(s.r2.f1, s.r1.f1 + 1e-12);
    EXPECT_LE(s.rl.f1, s.r1.f1 + 1e-12);
    refs.push_back(gen.sentence(15));
    const auto more = rouge(cand, refs);
    EXPECT_GE(more.r1.f1, s.r1.f1);
    EXPECT_GE(more.r2.f1, s.r2.f1);
    EXPECT_GE(more.rl.f1, s.rl.f1);
  }
}

TEST(PorterTest, Vectors) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"caresses", "caress"},    {"ponies", "poni"},        {"ties", "ti"},
      {"caress", "caress"},      {"cats", "cat"},           {"feed", "feed"},
      {"agreed", "agre"},        {"plastered", "plaster"},  {"motoring", "motor"},
      {"sing", "sing"},          {"conflated", "conflat"},  {"troubled", "troubl"},
      {"sized", "size"},         {"hopping", "hop"},        {"tanned", "tan"},
      {"falling", "fall"},       {"hissing", "hiss"},       {"fizzed", "fizz"},
      {"failing", "fail"},       {"filing", "file"},        {"happy", "happi"},
      {"sky", "sky"},            {"relational", "relat"},   {"conditional", "condit"},
      {"rational", "ration"},    {"valenci", "valenc"},     {"digitizer", "digit"},
      {"generalization", "gener"}, {"oscillators", "oscil"}, {"hopefulness", "hope"},
      {"formative", "form"},     {"electrical", "electr"},  {"adoption", "adopt"},
      {"controll", "control"},   {"roll", "roll"},          {"probate", "probat"},
      {"rate", "rate"},          {"cease", "ceas"},         {"generously", "gener"}};
  for (const auto &[word, stem] : cases) EXPECT_EQ(porter_stem(word), stem) << word;
  EXPECT_EQ(porter_stem("Café"), "Café");
  EXPECT_EQ(porter_stem("a"), "a");
}

TEST(SplitTest, Deterministic) {
  std::vector<std::string> dev;
  for (int i = 0; i < 25; ++i) dev.push_back("d" + std::to_string(i));
  const auto a = make_split(dev, 42, {"t0", "t1"});
  EXPECT_EQ(a.train_ids.size(), 15u);
  EXPECT_EQ(a.val_ids.size(), 10u);
  EXPECT_EQ(a.test_ids, (std::vector<std::string>{"t0", "t1"}));
  std::set<std::string> all(a.train_ids.begin(), a.train_ids.end());
  all.insert(a.val_ids.begin(), a.val_ids.end());
  EXPECT_EQ(all, std::set<std::string>(dev.begin(), dev.end()));
  const auto b = make_split(dev, 42);
  EXPECT_EQ(a.train_ids, b.train_ids);
  EXPECT_EQ(a.val_ids, b.val_ids);

  EXPECT_THROW(make_split({"x"}, 1), std::invalid_argument);
  auto dup = dev;
  dup[1] = dup[0];
  EXPECT_THROW(make_split(dup, 1), std::invalid_argument);
  EXPECT_THROW(make_split(dev, 1, {"d3"}), std::invalid_argument);
}

TEST(EvaluateFileTest, HandComputedMeans) {
  ScratchDir dir("eval");
  write_file(dir.file("gold.jsonl"),
             R"({"item_id": "x", "references": ["the pool was great"]})"
             "\n"
             R"({"item_id": "y", "references": ["the staff were very friendly"]})"
             "\n"
             R"({"item_id": "z", "references": ["unused"]})"
             "\n");
  write_file(dir.file("cand.jsonl"),
             R"({"item_id": "x", "summary": "The pool was great."})"
             "\n"
             R"({"item_id": "y", "summary": "Staff were friendly."})"
             "\n");
  const auto report = evaluate_file(dir.file("cand.jsonl"), dir.file("gold.jsonl"));
  ASSERT_EQ(report.per_item.size(), 2u);
  // y: unigrams P 3/3, R 3/5; bigrams 1 of 2 and 1 of 4; LCS 3.
  expect_prf(report.per_item[1].score.r1, 1.0, 0.6, 0.75);
  expect_prf(report.per_item[1].score.r2, 0.5, 0.25, 1.0 / 3);
  expect_prf(report.mean.r1, 1.0, 0.8, 0.875);
  expect_prf(report.mean.r2, 0.75, 0.625, 2.0 / 3);
  expect_prf(report.mean.rl, 1.0, 0.8, 0.875);

  const auto j = report.to_json();
  EXPECT_EQ(j["per_item"].size(), 2u);
  EXPECT_EQ(j["per_item"][0]["item_id"], "x");
  EXPECT_NEAR(j["mean"]["r1"]["f1"].get<double>(), 0.875, 1e-12);
  EXPECT_EQ(j["config"]["agg"], "max");
}

TEST(EvaluateFileTest, IdenticalToFirstReferences) {
  ScratchDir dir("eval");
  std::string gold, cand;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "i" + std::to_string(i);
    const std::string ref = "summary number " + std::to_string(i) + " was fine";
    gold += nlohmann::json{{"item_id", id}, {"references", {ref, "something else"}}}.dump() + "\n";
    cand += nlohmann::json{{"item_id", id}, {"summary", ref}}.dump() + "\n";
  }
  write_file(dir.file("gold.jsonl"), gold);
  write_file(dir.file("cand.jsonl"), cand);
  const auto report = evaluate_file(dir.file("cand.jsonl"), dir.file("gold.jsonl"));
  EXPECT_EQ(report.mean.r1.f1, 1.0);
  EXPECT_EQ(report.mean.r2.f1, 1.0);
  EXPECT_EQ(report.mean.rl.f1, 1.0);
}

TEST(EvaluateFileTest, Errors) {
  ScratchDir dir("eval");
  write_file(dir.file("gold.jsonl"), R"({"item_id": "x", "references": ["a b"]})"
                                     "\n");
  write_file(dir.file("empty.jsonl"), "");
  EXPECT_THROW(evaluate_file(dir.file("empty.jsonl"), dir.file("gold.jsonl")), std::runtime_error);
  write_file(dir.file("missing.jsonl"), R"({"item_id": "q", "summary": "a"})"
                                        "\n"
                                        R"({"item_id": "w", "summary": "a"})"
                                        "\n");
  try {
    evaluate_file(dir.file("missing.jsonl"), dir.file("gold.jsonl"));
    FAIL();
  } catch (const std::exception &e) {
    EXPECT_NE(std::string(e.what()).find("q"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("w"), std::string::npos);
  }
  write_file(dir.file("dup.jsonl"), R"({"item_id": "x", "summary": "a"})"
                                    "\n"
                                    R"({"item_id": "x", "summary": "b"})"
                                    "\n");
  EXPECT_THROW(evaluate_file(dir.file("dup.jsonl"), dir.file("gold.jsonl")), CorpusError);
}

}  // namespace
}  // namespace forge
