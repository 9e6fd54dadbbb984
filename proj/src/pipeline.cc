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

#include "forge/pipeline.h"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_set>

#include "forge/hash.h"
#include "forge/random.h"

namespace forge {

using nlohmann::json;
namespace fs = std::filesystem;

json config_json(const PipelineConfig &cfg, const StopwordList &stopwords) {
  json delimiters = coordinating_conjunctions();
  delimiters.push_back(",");
  delimiters.push_back(".");
  auto unlimited_or = [](size_t v) -> json {
    return v == kUnlimited ? json("unlimited") : json(v);
  };
  return json{
      {"delimiters", delimiters},
      {"min_clause_len", cfg.min_clause_len},
      {"backend", cfg.backend.kind == BackendKind::kRemote ? "remote" : "lexical"},
      {"tau", cfg.backend.entail_threshold ? json(*cfg.backend.entail_threshold) : json(nullptr)},
      {"token_budget", unlimited_or(cfg.selection.token_budget)},
      {"max_overlap", unlimited_or(cfg.selection.max_overlap)},
      {"pool_size", unlimited_or(cfg.selection.pool_size)},
      {"strategy", strategy_name(cfg.sampling.strategy)},
      {"k", cfg.sampling.k},
      {"seed", cfg.sampling.seed},
      {"stopwords", stopwords.digest()},
  };
}

std::string config_fingerprint(const PipelineConfig &cfg, const StopwordList &stopwords) {
  return to_hex(hash_fields({config_json(cfg, stopwords).dump()}));
}

json RunStats::to_json() const {
  json fails = json::array();
  for (const auto &f : failures) fails.push_back({{"item_id", f.item_id}, {"error", f.error}});
  return json{{"items_total", items_total},
              {"items_done", items_done},
              {"items_failed", items_failed},
              {"items_excluded", items_excluded},
              {"items_resumed", items_resumed},
              {"pairs_judged", pairs_judged},
              {"cache_hits", cache_hits},
              {"expected_pairs", expected_pairs},
              {"premises_over_limit", long_premises},
              {"wall_time", wall_time},
              {"interrupted", interrupted},
              {"failures", fails}};
}

ItemResult process_item(const Item &item, Entailer &entailer, const PipelineConfig &cfg,
                        const std::string &fingerprint) {
  ItemResult res;
  res.propositions = extract_all(item, cfg.min_clause_len);
  res.num_reviews = item.reviews.size();
  res.num_propositions = res.propositions.size();
  for (const auto &r : item.reviews) {
    if (count_tokens(r.text) > cfg.premise_token_limit) ++res.long_premises;
  }

  auto scored = score_item(item, res.propositions, entailer);
  res.pairs_judged = scored.judged;
  res.cache_hits = scored.cache_hits;

  const SilverSummary summary = select_summary(scored.scored, cfg.selection);
  const std::vector<Review> pool = remove_provenance(item, summary);

  std::unordered_set<std::string> in_pool;
  for (const auto &r : pool) in_pool.insert(r.review_id);
  std::vector<std::vector<std::string>> support_sets;
  for (const auto &s : summary.selected) {
    auto &set = support_sets.emplace_back();
    for (const auto &id : s.support) {
      if (in_pool.count(id)) set.push_back(id);
    }
  }

  SilverRecord &rec = res.record;
  rec.item_id = item.item_id;
  rec.summary_text = summary.text;
  rec.config_fingerprint = fingerprint;
  for (size_t j = 0; j < summary.selected.size(); ++j) {
    const auto &s = summary.selected[j];
    rec.selected.push_back({s.proposition.text, s.score, s.support_fraction, s.support,
                            s.proposition.source_review_id});
    if (s.score >= 2 && support_sets[j].empty()) {
      // Every other supporting review was itself a provenance review.
      if (std::find(rec.flags.begin(), rec.flags.end(), "support_lost") == rec.flags.end()) {
        rec.flags.push_back("support_lost");
      }
    }
  }
  if (summary.selected.empty()) rec.flags.push_back("empty_summary");

  if (pool.empty()) {
    rec.flags.push_back("empty_pool");
  } else {
    SampleConfig sc = cfg.sampling;
    sc.seed = derive_item_seed(cfg.sampling.seed, item.item_id);
    SourceSet sources = sample_sources(pool, summary, support_sets, sc);
    rec.source_review_ids = std::move(sources.review_ids);
    if (sources.pool_exhausted) rec.flags.push_back("pool_smaller_than_k");
  }
  return res;
}

void validate_silver_record(const SilverRecord &record, const SelectionConfig &selection,
                            const StopwordList &stopwords) {
  check_silver_structure(record);
  size_t tokens = 0;
  for (size_t i = 0; i < record.selected.size(); ++i) {
    tokens += count_tokens(record.selected[i].text);
    for (size_t j = i + 1; j < record.selected.size(); ++j) {
      if (selection.max_overlap != kUnlimited &&
          overlap(record.selected[i].text, record.selected[j].text, stopwords) >=
              selection.max_overlap) {
        throw std::invalid_argument("silver record " + record.item_id +
                                    ": redundant propositions " + std::to_string(i) + " and " +
                                    std::to_string(j));
      }
    }
  }
  if (tokens > selection.token_budget) {
    throw std::invalid_argument("silver record " + record.item_id + ": " +
                                std::to_string(tokens) + " tokens exceed the budget");
  }
  if (count_tokens(record.summary_text) > tokens) {
    throw std::invalid_argument("silver record " + record.item_id +
                                ": summary text longer than its propositions");
  }
}

std::string stats_path_for(const std::string &out_path) { return out_path + ".stats.json"; }

// ---------------------------------------------------------------------------
// Checkpointing

namespace {

struct CheckpointEntry {
  std::string item_id;
  bool done = false;
  uint64_t offset = 0;
  size_t n = 0, m = 0, judged = 0, hits = 0, long_premises = 0;
  std::string error;
};

json entry_json(const CheckpointEntry &e) {
  json j{{"item_id", e.item_id},     {"status", e.done ? "done" : "failed"},
         {"offset", e.offset},       {"n", e.n},
         {"m", e.m},                 {"pairs_judged", e.judged},
         {"cache_hits", e.hits},     {"long_premises", e.long_premises}};
  if (!e.done) j["error"] = e.error;
  return j;
}

struct Checkpoint {
  std::vector<CheckpointEntry> entries;
  uint64_t valid_bytes = 0;  // checkpoint file length up to the last whole line
};

// Reads a checkpoint, ignoring a torn final line. Returns nullopt when the
// file does not exist or is empty.
std::optional<Checkpoint> read_checkpoint(const std::string &path, const std::string &fingerprint) {
  std::error_code ec;
  if (!fs::exists(path, ec) || fs::file_size(path, ec) == 0) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  Checkpoint ckpt;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (in.eof()) break;  // no trailing newline: torn write
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &) {
      break;
    }
    if (header) {
      if (j.value("fingerprint", "") != fingerprint) {
        throw std::runtime_error("checkpoint " + path +
                                 " was written with a different configuration; "
                                 "delete it to start over");
      }
      header = false;
    } else {
      CheckpointEntry e;
      e.item_id = j.at("item_id").get<std::string>();
      e.done = j.at("status").get<std::string>() == "done";
      e.offset = j.at("offset").get<uint64_t>();
      e.n = j.at("n").get<size_t>();
      e.m = j.at("m").get<size_t>();
      e.judged = j.at("pairs_judged").get<size_t>();
      e.hits = j.at("cache_hits").get<size_t>();
      e.long_premises = j.value("long_premises", size_t{0});
      e.error = j.value("error", "");
      ckpt.entries.push_back(std::move(e));
    }
    ckpt.valid_bytes += line.size() + 1;
  }
  if (header) return std::nullopt;
  return ckpt;
}

void write_or_throw(std::ofstream &out, const std::string &data, const std::string &path) {
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_file_atomically(const std::string &path, const std::string &data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    write_or_throw(out, data, tmp);
  }
  fs::rename(tmp, path);
}

// Fixed-size pool pulling (sequence, item) tasks from a shared queue.
class ItemPool {
 public:
  struct Outcome {
    std::optional<ItemResult> result;
    std::string item_id;
    std::string error;
  };

  ItemPool(size_t workers, Entailer &entailer, const PipelineConfig &cfg, std::string fingerprint)
      : entailer_(entailer), cfg_(cfg), fingerprint_(std::move(fingerprint)) {
    for (size_t i = 0; i < std::max<size_t>(1, workers); ++i) {
      threads_.emplace_back([this](std::stop_token stop) { work(stop); });
    }
  }

  ~ItemPool() {
    {
      std::lock_guard lock(mu_);
      stopping_ = true;
      tasks_.clear();
    }
    for (auto &t : threads_) t.request_stop();
    task_cv_.notify_all();
    threads_.clear();
  }

  void submit(size_t seq, Item item) {
    {
      std::lock_guard lock(mu_);
      tasks_.emplace_back(seq, std::move(item));
    }
    task_cv_.notify_one();
  }

  Outcome take(size_t seq) {
    std::unique_lock lock(mu_);
    done_cv_.wait(lock, [&] { return results_.count(seq) > 0; });
    auto node = results_.extract(seq);
    return std::move(node.mapped());
  }

 private:
  void work(std::stop_token stop) {
    for (;;) {
      std::pair<size_t, Item> task;
      {
        std::unique_lock lock(mu_);
        task_cv_.wait(lock, [&] { return stopping_ || !tasks_.empty(); });
        if (stopping_ || stop.stop_requested()) return;
        task = std::move(tasks_.front());
        tasks_.pop_front();
      }
      Outcome outcome;
      outcome.item_id = task.second.item_id;
      try {
        outcome.result = process_item(task.second, entailer_, cfg_, fingerprint_);
      } catch (const std::exception &e) {
        outcome.error = e.what();
      }
      {
        std::lock_guard lock(mu_);
        results_.emplace(task.first, std::move(outcome));
      }
      done_cv_.notify_all();
    }
  }

  Entailer &entailer_;
  const PipelineConfig &cfg_;
  const std::string fingerprint_;
  std::mutex mu_;
  std::condition_variable task_cv_, done_cv_;
  std::deque<std::pair<size_t, Item>> tasks_;
  std::map<size_t, Outcome> results_;
  bool stopping_ = false;
  std::vector<std::jthread> threads_;
};

}  // namespace

RunStats run(const std::string &corpus_path, const std::string &out_path,
             const PipelineConfig &cfg) {
  cfg.backend.validate();
  std::shared_ptr<EntailmentBackend> backend;
  if (cfg.backend.kind == BackendKind::kRemote) {
    backend = std::make_shared<RemoteBackend>(cfg.backend);
  } else {
    backend = std::make_shared<LexicalBackend>();
  }
  return run(corpus_path, out_path, cfg, std::move(backend));
}

RunStats run(const std::string &corpus_path, const std::string &out_path,
             const PipelineConfig &cfg, std::shared_ptr<EntailmentBackend> backend) {
  const auto started = std::chrono::steady_clock::now();
  if (cfg.sampling.k == 0) throw std::invalid_argument("k must be >= 1");
  const std::string fingerprint = config_fingerprint(cfg);
  const std::string ckpt_path = cfg.checkpoint_path.value_or(out_path + ".ckpt");
  const std::string tmp_path = out_path + ".tmp";

  RunStats stats;
  std::unordered_set<std::string> finished;

  // Restore or start the checkpoint and the partial output.
  std::ofstream out, ckpt_out;
  const auto ckpt = read_checkpoint(ckpt_path, fingerprint);
  if (ckpt) {
    uint64_t offset = 0;
    for (const auto &e : ckpt->entries) {
      finished.insert(e.item_id);
      offset = e.offset;
      ++stats.items_resumed;
      stats.long_premises += e.long_premises;
      if (e.done) {
        ++stats.items_done;
        stats.pairs_judged += e.judged;
        stats.cache_hits += e.hits;
        stats.expected_pairs += e.n * e.m;
      } else {
        ++stats.items_failed;
        stats.failures.push_back({e.item_id, e.error});
      }
    }
    std::error_code ec;
    if (!fs::exists(tmp_path, ec) || fs::file_size(tmp_path) < offset) {
      throw std::runtime_error("checkpoint " + ckpt_path + " refers to missing output " +
                               tmp_path);
    }
    fs::resize_file(tmp_path, offset);
    fs::resize_file(ckpt_path, ckpt->valid_bytes);
    out.open(tmp_path, std::ios::binary | std::ios::app);
    ckpt_out.open(ckpt_path, std::ios::binary | std::ios::app);
  } else {
    out.open(tmp_path, std::ios::binary | std::ios::trunc);
    ckpt_out.open(ckpt_path, std::ios::binary | std::ios::trunc);
    if (ckpt_out) {
      write_or_throw(ckpt_out, json{{"fingerprint", fingerprint}}.dump() + "\n", ckpt_path);
    }
  }
  if (!out) throw std::runtime_error("cannot write " + tmp_path);
  if (!ckpt_out) throw std::runtime_error("cannot write " + ckpt_path);
  uint64_t offset = static_cast<uint64_t>(fs::file_size(tmp_path));

  std::ofstream dump;
  if (cfg.dump_propositions_path) {
    dump.open(*cfg.dump_propositions_path,
              std::ios::binary | (ckpt ? std::ios::app : std::ios::trunc));
    if (!dump) throw std::runtime_error("cannot write " + *cfg.dump_propositions_path);
  }

  Entailer entailer(cfg.backend, std::move(backend));
  CorpusReader reader(corpus_path);
  const size_t workers = std::max<size_t>(1, cfg.workers);
  const size_t window = workers * 4;

  size_t next_seq = 0, next_write = 0, written_now = 0;
  bool eof = false;
  {
    ItemPool pool(workers, entailer, cfg, fingerprint);
    for (;;) {
      while (!eof && next_seq - next_write < window) {
        auto item = reader.next();
        if (!item) {
          eof = true;
          break;
        }
        if (item->reviews.size() < cfg.min_reviews) {
          ++stats.items_excluded;
          continue;
        }
        ++stats.items_total;
        if (finished.count(item->item_id)) continue;
        pool.submit(next_seq++, std::move(*item));
      }
      if (next_write == next_seq) break;

      auto outcome = pool.take(next_write++);
      CheckpointEntry entry;
      entry.item_id = outcome.item_id;
      if (outcome.result) {
        const auto &res = *outcome.result;
        const std::string line = silver_line(res.record) + "\n";
        write_or_throw(out, line, tmp_path);
        offset += line.size();
        if (dump.is_open()) dump_propositions(res.propositions, dump);
        entry.done = true;
        entry.n = res.num_reviews;
        entry.m = res.num_propositions;
        entry.judged = res.pairs_judged;
        entry.hits = res.cache_hits;
        entry.long_premises = res.long_premises;
        ++stats.items_done;
        stats.pairs_judged += res.pairs_judged;
        stats.cache_hits += res.cache_hits;
        stats.expected_pairs += res.num_reviews * res.num_propositions;
        stats.long_premises += res.long_premises;
      } else {
        entry.error = outcome.error;
        ++stats.items_failed;
        stats.failures.push_back({outcome.item_id, outcome.error});
      }
      entry.offset = offset;
      write_or_throw(ckpt_out, entry_json(entry).dump() + "\n", ckpt_path);

      if (cfg.stop_after_items && ++written_now >= cfg.stop_after_items) {
        stats.interrupted = true;
        break;
      }
    }
  }

  out.close();
  ckpt_out.close();
  if (!stats.interrupted) {
    fs::rename(tmp_path, out_path);
    fs::remove(ckpt_path);
  }
  stats.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  json doc = stats.to_json();
  doc["config"] = config_json(cfg);
  doc["config_fingerprint"] = fingerprint;
  doc["corpus"] = corpus_path;
  doc["output"] = out_path;
  write_file_atomically(stats_path_for(out_path), doc.dump(2) + "\n");
  return stats;
}

ReviewIndex index_reviews(const std::vector<Item> &items) {
  ReviewIndex index;
  for (const auto &item : items) {
    auto &reviews = index[item.item_id];
    for (const auto &r : item.reviews) reviews.emplace(r.review_id, r.text);
  }
  return index;
}

size_t emit_training_examples(const std::vector<SilverRecord> &records,
                              const ReviewIndex &reviews_by_id, const std::string &out_path,
                              const std::string &separator) {
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  size_t lines = 0;
  for (const auto &rec : records) {
    auto item = reviews_by_id.find(rec.item_id);
    if (item == reviews_by_id.end()) {
      throw CorpusError("silver record refers to unknown item " + rec.item_id);
    }
    std::string inputs;
    for (size_t i = 0; i < rec.source_review_ids.size(); ++i) {
      auto it = item->second.find(rec.source_review_ids[i]);
      if (it == item->second.end()) {
        throw CorpusError("silver record " + rec.item_id + " refers to unknown review " +
                          rec.source_review_ids[i]);
      }
      if (i > 0) inputs += separator;
      inputs += it->second;
    }
    out << json{{"inputs", inputs}, {"targets", rec.summary_text}}.dump() << '\n';
    ++lines;
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + out_path);
  return lines;
}

}  // namespace forge
