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

// forge: silver-data generation for opinion summarization.
//
//   forge run   --corpus F --out F [knobs...]   build silver records
//   forge emit  --silver F --corpus F --out F    write {"inputs","targets"} pairs
//   forge sort  --in F --out F                   sort a reviews file by item_id
//   forge stats --run-dir D                      summarize run statistics
//   forge eval  --candidates F --gold F          multi-reference ROUGE

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "forge/corpus.h"
#include "forge/evalkit.h"
#include "forge/pipeline.h"

namespace {

using nlohmann::json;

int cmd_run(const forge::PipelineConfig &base, const std::string &corpus, const std::string &out,
            const std::string &backend, const std::string &strategy, double tau, bool tau_set,
            const std::string &cache, size_t pool_size) {
  forge::PipelineConfig cfg = base;
  cfg.backend.kind = backend == "remote" ? forge::BackendKind::kRemote : forge::BackendKind::kLexical;
  if (tau_set) cfg.backend.entail_threshold = tau;
  if (!cache.empty()) cfg.backend.cache_path = cache;
  cfg.sampling.strategy = forge::parse_strategy(strategy);
  if (pool_size > 0) cfg.selection.pool_size = pool_size;
  const auto stats = forge::run(corpus, out, cfg);
  std::cout << stats.to_json().dump(2) << std::endl;
  return 0;
}

int cmd_emit(const std::string &silver, const std::string &corpus, const std::string &out,
             const std::string &separator) {
  const auto records = forge::read_silver(silver);
  for (const auto &r : records) forge::check_silver_structure(r);
  const auto loaded = forge::load_corpus(corpus, 1);
  const size_t n =
      forge::emit_training_examples(records, forge::index_reviews(loaded.items), out, separator);
  std::cerr << "wrote " << n << " training examples to " << out << std::endl;
  return 0;
}

int cmd_stats(const std::string &dir) {
  namespace fs = std::filesystem;
  json runs = json::array();
  json totals{{"items_total", 0}, {"items_done", 0},   {"items_failed", 0},
              {"pairs_judged", 0}, {"cache_hits", 0}, {"wall_time", 0.0}};
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 11 &&
        name.compare(name.size() - 11, 11, ".stats.json") == 0) {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    std::cerr << "no *.stats.json files in " << dir << std::endl;
    return 1;
  }
  std::sort(files.begin(), files.end());
  for (const auto &path : files) {
    std::ifstream in(path);
    json doc = json::parse(in);
    for (auto &[key, value] : totals.items()) {
      if (key == "wall_time") {
        value = value.get<double>() + doc.value(key, 0.0);
      } else {
        value = value.get<size_t>() + doc.value(key, size_t{0});
      }
    }
    doc["file"] = path.filename().string();
    runs.push_back(std::move(doc));
  }
  totals["accounting_holds"] = true;
  for (const auto &r : runs) {
    if (r.value("pairs_judged", size_t{0}) + r.value("cache_hits", size_t{0}) !=
        r.value("expected_pairs", size_t{0})) {
      totals["accounting_holds"] = false;
    }
  }
  std::cout << json{{"runs", runs}, {"totals", totals}}.dump(2) << std::endl;
  return 0;
}

int cmd_eval(const std::string &candidates, const std::string &gold, const std::string &agg,
             bool stem, const std::string &out) {
  forge::RougeOptions opts;
  opts.aggregation = agg == "mean" ? forge::RefAggregation::kMean : forge::RefAggregation::kMax;
  opts.stem = stem;
  const auto report = forge::evaluate_file(candidates, gold, opts);
  const std::string text = report.to_json().dump(2);
  if (out.empty()) {
    std::cout << text << std::endl;
  } else {
    std::ofstream f(out);
    f << text << '\n';
    if (!f) throw std::runtime_error("cannot write " + out);
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Silver-data generation for opinion summarization"};
  app.require_subcommand(1);

  forge::PipelineConfig cfg;
  std::string corpus, out, backend = "lexical", strategy = "uniform", cache, checkpoint, dump;
  double tau = 0.0;
  size_t pool_size = 0;
  auto *run = app.add_subcommand("run", "Build silver (sources, summary) records");
  run->add_option("--corpus", corpus, "Reviews file (JSON Lines, sorted by item_id)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out, "Silver output file")->required();
  run->add_option("--backend", backend, "Entailment backend")
      ->check(CLI::IsMember({"remote", "lexical"}));
  run->add_option("--endpoint", cfg.backend.endpoint, "Remote classifier base URL");
  auto *tau_opt = run->add_option("--tau", tau, "Minimum P(entailment) for support");
  run->add_option("--min-reviews", cfg.min_reviews, "Skip items with fewer reviews");
  run->add_option("--min-clause-len", cfg.min_clause_len, "Minimum proposition length in tokens");
  run->add_option("--token-budget", cfg.selection.token_budget, "Summary length in tokens");
  run->add_option("--max-overlap", cfg.selection.max_overlap,
                  "Reject candidates sharing this many content words");
  run->add_option("--pool-size", pool_size, "Consider only the top-n propositions (0 = all)");
  run->add_option("--strategy", strategy, "Source sampling strategy")
      ->check(CLI::IsMember({"uniform", "equal", "proportional"}));
  run->add_option("--k", cfg.sampling.k, "Number of source reviews")->check(CLI::PositiveNumber);
  run->add_option("--seed", cfg.sampling.seed, "Sampling seed");
  run->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--batch-size", cfg.backend.batch_size, "Pairs per backend request")
      ->check(CLI::PositiveNumber);
  run->add_option("--cache", cache, "Persistent verdict cache file");
  run->add_option("--checkpoint", checkpoint, "Checkpoint file (default <out>.ckpt)");
  run->add_option("--dump-propositions", dump, "Write extracted propositions as JSON Lines");

  std::string silver, separator = " <rev> ";
  auto *emit = app.add_subcommand("emit", "Write training examples from silver records");
  emit->add_option("--silver", silver, "Silver records file")->required()->check(CLI::ExistingFile);
  emit->add_option("--corpus", corpus, "Reviews file the records were built from")
      ->required()
      ->check(CLI::ExistingFile);
  emit->add_option("--out", out, "Output JSON Lines file")->required();
  emit->add_option("--separator", separator, "String placed between source reviews");

  std::string sort_in;
  auto *sort = app.add_subcommand("sort", "Stable-sort a reviews file by item_id");
  sort->add_option("--in", sort_in, "Input reviews file")->required()->check(CLI::ExistingFile);
  sort->add_option("--out", out, "Sorted output file")->required();

  std::string run_dir;
  auto *stats = app.add_subcommand("stats", "Summarize *.stats.json files of finished runs");
  stats->add_option("--run-dir", run_dir, "Directory holding run outputs")
      ->required()
      ->check(CLI::ExistingDirectory);

  std::string candidates, gold, agg = "max", report_out;
  bool stem = false;
  auto *eval = app.add_subcommand("eval", "Score candidate summaries with ROUGE");
  eval->add_option("--candidates", candidates, "JSON Lines {\"item_id\", \"summary\"}")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--gold", gold, "Gold JSON Lines with references")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--agg", agg, "Multi-reference aggregation")
      ->check(CLI::IsMember({"max", "mean"}));
  eval->add_flag("--stem", stem, "Porter-stem tokens before matching");
  eval->add_option("--out", report_out, "Report file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (!checkpoint.empty()) cfg.checkpoint_path = checkpoint;
      if (!dump.empty()) cfg.dump_propositions_path = dump;
      return cmd_run(cfg, corpus, out, backend, strategy, tau, tau_opt->count() > 0, cache,
                     pool_size);
    }
    if (*emit) return cmd_emit(silver, corpus, out, separator);
    if (*sort) {
      const size_t n = forge::sort_corpus(sort_in, out);
      std::cerr << "sorted " << n << " reviews into " << out << std::endl;
      return 0;
    }
    if (*stats) return cmd_stats(run_dir);
    if (*eval) return cmd_eval(candidates, gold, agg, stem, report_out);
  } catch (const std::exception &e) {
    std::cerr << "forge: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
