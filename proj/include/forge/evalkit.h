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

// Multi-reference ROUGE scoring and the few-shot dev split.

#ifndef FORGE_EVALKIT_H_
#define FORGE_EVALKIT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace forge {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RougeScore {
  PRF r1, r2, rl;
};

enum class RefAggregation { kMax, kMean };

struct RougeOptions {
  RefAggregation aggregation = RefAggregation::kMax;
  bool stem = false;
};

// Lowercased tokens; every ASCII character other than a letter or digit
// separates tokens. Stems tokens longer than three characters when asked.
std::vector<std::string> rouge_tokens(std::string_view text, bool stem = false);

// Harmonic mean, 0 when both inputs are 0.
double f_measure(double precision, double recall);

PRF rouge_n(const std::vector<std::string> &candidate, const std::vector<std::string> &reference,
            size_t n);
PRF rouge_l(const std::vector<std::string> &candidate, const std::vector<std::string> &reference);

// Under kMax, each metric reports the reference with the highest F1 (first
// on ties). Under kMean, precision, recall and F1 are each averaged over
// references. Throws std::invalid_argument when references is empty.
RougeScore rouge(std::string_view candidate, const std::vector<std::string> &references,
                 const RougeOptions &opts = {});

// Porter (1980) suffix-stripping stemmer for lowercase ASCII words.
std::string porter_stem(std::string_view word);

struct SplitSpec {
  std::vector<std::string> train_ids;  // 15
  std::vector<std::string> val_ids;    // 10
  std::vector<std::string> test_ids;   // passed through
  uint64_t seed = 0;
};

inline constexpr size_t kDevItems = 25;
inline constexpr size_t kTrainItems = 15;

// Seeded shuffle of the 25 dev ids; first 15 train, next 10 validation.
SplitSpec make_split(const std::vector<std::string> &dev_item_ids, uint64_t seed,
                     const std::vector<std::string> &test_item_ids = {});

struct ItemScore {
  std::string item_id;
  RougeScore score;
};

struct EvalReport {
  std::vector<ItemScore> per_item;
  RougeScore mean;
  RougeOptions options;

  nlohmann::json to_json() const;
};

// Candidates file: JSON Lines {"item_id": str, "summary": str}. Every
// candidate item must be present in the gold file.
EvalReport evaluate_file(const std::string &candidates_path, const std::string &gold_path,
                         const RougeOptions &opts = {});

}  // namespace forge

#endif  // FORGE_EVALKIT_H_
