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

// End-to-end silver-data run: extract propositions, judge all
// (review, proposition) pairs, score, select and polish a summary, remove
// provenance reviews, sample the source side and write one SilverRecord per
// item.
//
// Items are processed by a worker pool; a single coordinator owns the output
// and checkpoint files and writes records in corpus order, so output bytes do
// not depend on the worker count. Output goes to "<out>.tmp" and is renamed
// over <out> once the run completes. The checkpoint is an append-only log of
// finished items with the output offset after each, so an interrupted run
// resumes from the last finished item without re-judging it.

#ifndef FORGE_PIPELINE_H_
#define FORGE_PIPELINE_H_

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "forge/consensus.h"
#include "forge/corpus.h"
#include "forge/entailment.h"
#include "forge/sampler.h"

namespace forge {

struct PipelineConfig {
  size_t min_reviews = 50;
  size_t min_clause_len = kDefaultMinClauseLen;
  BackendConfig backend;
  SelectionConfig selection;
  SampleConfig sampling;
  size_t workers = 1;
  std::optional<std::string> checkpoint_path;  // defaults to "<out>.ckpt"
  std::optional<std::string> dump_propositions_path;
  // Reviews longer than this many whitespace tokens are counted as premises
  // the remote classifier will likely truncate.
  size_t premise_token_limit = 512;
  // Stop after this many items have been written (0 = run to completion).
  // Leaves the run resumable, as a kill would.
  size_t stop_after_items = 0;
};

nlohmann::json config_json(const PipelineConfig &cfg,
                           const StopwordList &stopwords = StopwordList::english());
// Hex digest over every knob that changes record contents.
std::string config_fingerprint(const PipelineConfig &cfg,
                               const StopwordList &stopwords = StopwordList::english());

struct ItemFailure {
  std::string item_id;
  std::string error;
};

struct RunStats {
  size_t items_total = 0;     // eligible items seen, resumed ones included
  size_t items_done = 0;
  size_t items_failed = 0;
  size_t items_excluded = 0;  // below min_reviews
  size_t items_resumed = 0;   // restored from the checkpoint
  size_t pairs_judged = 0;
  size_t cache_hits = 0;
  size_t expected_pairs = 0;  // sum of N * M over done items
  size_t long_premises = 0;
  double wall_time = 0.0;
  bool interrupted = false;
  std::vector<ItemFailure> failures;

  bool accounting_holds() const { return pairs_judged + cache_hits == expected_pairs; }
  nlohmann::json to_json() const;
};

struct ItemResult {
  SilverRecord record;
  std::vector<Proposition> propositions;
  size_t num_reviews = 0;
  size_t num_propositions = 0;
  size_t pairs_judged = 0;
  size_t cache_hits = 0;
  size_t long_premises = 0;
};

// The whole per-item computation. Throws on backend failure.
ItemResult process_item(const Item &item, Entailer &entailer, const PipelineConfig &cfg,
                        const std::string &fingerprint);

// Full SilverRecord validation: structure plus pairwise overlap and budget.
void validate_silver_record(const SilverRecord &record, const SelectionConfig &selection,
                            const StopwordList &stopwords = StopwordList::english());

RunStats run(const std::string &corpus_path, const std::string &out_path,
             const PipelineConfig &cfg);
// Same, with an explicit backend in place of the one named by cfg.backend.
RunStats run(const std::string &corpus_path, const std::string &out_path,
             const PipelineConfig &cfg, std::shared_ptr<EntailmentBackend> backend);

std::string stats_path_for(const std::string &out_path);

// item_id -> review_id -> text
using ReviewIndex = std::unordered_map<std::string, std::unordered_map<std::string, std::string>>;
ReviewIndex index_reviews(const std::vector<Item> &items);

// Writes {"inputs", "targets"} lines: the sampled reviews joined by
// separator, and the summary text. Throws CorpusError on a dangling id.
size_t emit_training_examples(const std::vector<SilverRecord> &records,
                              const ReviewIndex &reviews_by_id, const std::string &out_path,
                              const std::string &separator);

}  // namespace forge

#endif  // FORGE_PIPELINE_H_
