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

// Data model and file formats: review corpora, gold evaluation sets and
// silver training records, all stored as JSON Lines.

#ifndef FORGE_CORPUS_H_
#define FORGE_CORPUS_H_

#include <cstddef>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace forge {

// Malformed or inconsistent input data. Carries the 1-based line number when
// the problem is tied to a line.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string &what, size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

struct Review {
  std::string item_id;
  std::string review_id;
  std::string text;

  bool operator==(const Review &) const = default;
};

struct Item {
  std::string item_id;
  std::vector<Review> reviews;

  bool operator==(const Item &) const = default;
};

struct GoldEvalItem {
  std::string item_id;
  std::vector<Review> reviews;
  std::vector<std::string> references;
};

// One selected summary proposition together with its consensus evidence.
struct SelectedProposition {
  std::string text;
  size_t score = 0;
  double support_fraction = 0.0;
  std::vector<std::string> support_review_ids;
  std::string source_review_id;

  bool operator==(const SelectedProposition &) const = default;
};

// A (sampled source reviews, silver summary) training pair for one item.
struct SilverRecord {
  std::string item_id;
  std::string summary_text;
  std::vector<SelectedProposition> selected;
  std::vector<std::string> source_review_ids;
  std::string config_fingerprint;
  // Condition markers such as "empty_summary" or "pool_smaller_than_k".
  std::vector<std::string> flags;

  bool operator==(const SilverRecord &) const = default;
};

void to_json(nlohmann::json &j, const SilverRecord &r);
void from_json(const nlohmann::json &j, SilverRecord &r);

// Parses one reviews-file line. Throws CorpusError tagged with line_no.
Review parse_review_line(const std::string &line, size_t line_no);

// Streams items from a reviews file that is sorted by item_id. Reviews of an
// item keep their file order. Fails fast when the item order regresses, on
// duplicate (item_id, review_id), empty texts and invalid UTF-8.
class CorpusReader {
 public:
  explicit CorpusReader(const std::string &path);

  // Next item regardless of size, or nullopt at end of file.
  std::optional<Item> next();

  size_t lines_read() const { return line_no_; }

 private:
  std::optional<Review> read_review();

  std::ifstream in_;
  std::string path_;
  size_t line_no_ = 0;
  std::optional<Review> pending_;
  std::string last_item_id_;
  bool started_ = false;
};

struct LoadedCorpus {
  std::vector<Item> items;
  size_t excluded = 0;  // items with fewer than min_reviews reviews
};

LoadedCorpus load_corpus(const std::string &path, size_t min_reviews);

std::vector<GoldEvalItem> load_gold(const std::string &path);

// Stable sort of a reviews file by item_id. Returns the number of records.
size_t sort_corpus(const std::string &in_path, const std::string &out_path);

// Structural SilverRecord checks that need no configuration: score equals
// support size, fractions in [0, 1], non-increasing scores, unique source
// reviews, and no source review that is the provenance of a selected
// proposition. Throws std::invalid_argument.
void check_silver_structure(const SilverRecord &record);

std::string silver_line(const SilverRecord &record);
void write_silver(const std::vector<SilverRecord> &records, const std::string &path);
std::vector<SilverRecord> read_silver(const std::string &path);

}  // namespace forge

#endif  // FORGE_CORPUS_H_
