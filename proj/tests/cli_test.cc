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

// Drives the forge binary end to end.

#include <gtest/gtest.h>

#include <cstdlib>

#include "forge/corpus.h"
#include "test_util.h"

namespace forge {
namespace {

using testing::make_item;
using testing::read_file;
using testing::ScratchDir;
using testing::write_file;

int forge_cli(const std::string &args, const ScratchDir &dir) {
  const std::string cmd = std::string(FORGE_BINARY) + " " + args + " >" + dir.file("stdout") +
                          " 2>" + dir.file("stderr");
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::TextGen gen(3);
    std::vector<Item> items;
    for (const char *id : {"b", "a"}) {
      std::vector<std::string> reviews(15);
      for (auto &r : reviews) r = gen.review(3, 9);
      items.push_back(make_item(id, reviews));
    }
    testing::write_corpus(dir.file("unsorted.jsonl"), items);
  }

  std::string path(const std::string &name) const { return dir.file(name); }

  ScratchDir dir{"cli"};
};

TEST_F(CliTest, SortRunEmitStats) {
  ASSERT_EQ(forge_cli("sort --in " + path("unsorted.jsonl") + " --out " + path("c.jsonl"), dir), 0);
  ASSERT_EQ(forge_cli("run --corpus " + path("c.jsonl") + " --out " + path("out.jsonl") +
                          " --backend lexical --min-reviews 2 --k 3 --seed 5 --workers 2"
                          " --strategy proportional --token-budget 12 --max-overlap 2",
                      dir),
            0)
      << read_file(path("stderr"));
  const auto stats = nlohmann::json::parse(read_file(path("stdout")));
  EXPECT_EQ(stats["items_done"], 2);
  EXPECT_EQ(stats["pairs_judged"].get<size_t>() + stats["cache_hits"].get<size_t>(),
            stats["expected_pairs"].get<size_t>());
  const auto records = read_silver(path("out.jsonl"));
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].item_id, "a");
  EXPECT_EQ(records[0].source_review_ids.size(), 3u);

  ASSERT_EQ(forge_cli("emit --silver " + path("out.jsonl") + " --corpus " + path("c.jsonl") +
                          " --out " + path("train.jsonl") + " --separator ' <rev> '",
                      dir),
            0)
      << read_file(path("stderr"));
  const std::string train = read_file(path("train.jsonl"));
  EXPECT_EQ(std::count(train.begin(), train.end(), '\n'), 2);
  EXPECT_NE(train.find(" <rev> "), std::string::npos);

  ASSERT_EQ(forge_cli("stats --run-dir " + dir.path().string(), dir), 0);
  const auto summary = nlohmann::json::parse(read_file(path("stdout")));
  EXPECT_EQ(summary["totals"]["items_done"], 2);
}

TEST_F(CliTest, RejectsBadArguments) {
  EXPECT_NE(forge_cli("run --corpus " + path("unsorted.jsonl") + " --out " + path("o.jsonl") +
                          " --strategy stratified",
                      dir),
            0);
  EXPECT_NE(forge_cli("run --corpus " + path("unsorted.jsonl") + " --out " + path("o.jsonl") +
                          " --k 0",
                      dir),
            0);
  // Unsorted input fails fast.
  EXPECT_NE(forge_cli("run --corpus " + path("unsorted.jsonl") + " --out " + path("o.jsonl") +
                          " --min-reviews 1",
                      dir),
            0);
  EXPECT_NE(read_file(path("stderr")).find("sorted"), std::string::npos);
  EXPECT_NE(forge_cli("bogus", dir), 0);
}

TEST_F(CliTest, Eval) {
  write_file(path("gold.jsonl"),
             R"({"item_id": "x", "references": ["the staff were very friendly", "nice staff"]})"
             "\n");
  write_file(path("cand.jsonl"), R"({"item_id": "x", "summary": "Staff were friendly."})"
                                 "\n");
  ASSERT_EQ(forge_cli("eval --candidates " + path("cand.jsonl") + " --gold " + path("gold.jsonl") +
                          " --agg mean --stem --out " + path("report.json"),
                      dir),
            0)
      << read_file(path("stderr"));
  const auto report = nlohmann::json::parse(read_file(path("report.json")));
  EXPECT_EQ(report["config"]["agg"], "mean");
  EXPECT_EQ(report["config"]["stem"], true);
  EXPECT_EQ(report["per_item"].size(), 1u);
  EXPECT_GT(report["mean"]["r1"]["f1"].get<double>(), 0.0);
}

}  // namespace
}  // namespace forge
