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

#include "forge/evalkit.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "forge/corpus.h"
#include "forge/random.h"

namespace forge {

using nlohmann::json;

std::vector<std::string> rouge_tokens(std::string_view text, bool stem) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    out.push_back(stem && cur.size() > 3 ? porter_stem(cur) : cur);
    cur.clear();
  };
  for (unsigned char c : text) {
    if (c >= 'A' && c <= 'Z') {
      cur.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      cur.push_back(static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

double f_measure(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

namespace {

PRF make_prf(size_t matches, size_t candidate_total, size_t reference_total) {
  PRF s;
  s.precision = candidate_total ? static_cast<double>(matches) / candidate_total : 0.0;
  s.recall = reference_total ? static_cast<double>(matches) / reference_total : 0.0;
  s.f1 = f_measure(s.precision, s.recall);
  return s;
}

std::map<std::vector<std::string>, size_t> ngram_counts(const std::vector<std::string> &tokens,
                                                        size_t n) {
  std::map<std::vector<std::string>, size_t> counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

PRF rouge_n(const std::vector<std::string> &candidate, const std::vector<std::string> &reference,
            size_t n) {
  const auto c = ngram_counts(candidate, n);
  const auto r = ngram_counts(reference, n);
  size_t matches = 0, c_total = 0, r_total = 0;
  for (const auto &[g, count] : c) {
    c_total += count;
    auto it = r.find(g);
    if (it != r.end()) matches += std::min(count, it->second);
  }
  for (const auto &[g, count] : r) r_total += count;
  return make_prf(matches, c_total, r_total);
}

PRF rouge_l(const std::vector<std::string> &candidate, const std::vector<std::string> &reference) {
  const size_t n = candidate.size(), m = reference.size();
  std::vector<size_t> prev(m + 1, 0), cur(m + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      cur[j] = candidate[i - 1] == reference[j - 1] ? prev[j - 1] + 1
                                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return make_prf(prev[m], n, m);
}

RougeScore rouge(std::string_view candidate, const std::vector<std::string> &references,
                 const RougeOptions &opts) {
  if (references.empty()) throw std::invalid_argument("rouge: at least one reference required");
  const auto cand = rouge_tokens(candidate, opts.stem);
  std::vector<RougeScore> per_ref;
  for (const auto &ref : references) {
    const auto r = rouge_tokens(ref, opts.stem);
    per_ref.push_back({rouge_n(cand, r, 1), rouge_n(cand, r, 2), rouge_l(cand, r)});
  }
  RougeScore out;
  auto aggregate = [&](PRF RougeScore::*metric) {
    PRF agg;
    if (opts.aggregation == RefAggregation::kMax) {
      agg = per_ref.front().*metric;
      for (const auto &s : per_ref) {
        if ((s.*metric).f1 > agg.f1) agg = s.*metric;
      }
    } else {
      for (const auto &s : per_ref) {
        agg.precision += (s.*metric).precision;
        agg.recall += (s.*metric).recall;
        agg.f1 += (s.*metric).f1;
      }
      const double k = static_cast<double>(per_ref.size());
      agg.precision /= k;
      agg.recall /= k;
      agg.f1 /= k;
    }
    return agg;
  };
  out.r1 = aggregate(&RougeScore::r1);
  out.r2 = aggregate(&RougeScore::r2);
  out.rl = aggregate(&RougeScore::rl);
  return out;
}

SplitSpec make_split(const std::vector<std::string> &dev_item_ids, uint64_t seed,
                     const std::vector<std::string> &test_item_ids) {
  if (dev_item_ids.size() != kDevItems) {
    throw std::invalid_argument("make_split: expected " + std::to_string(kDevItems) +
                                " dev items, got " + std::to_string(dev_item_ids.size()));
  }
  std::set<std::string> dev(dev_item_ids.begin(), dev_item_ids.end());
  if (dev.size() != dev_item_ids.size()) throw std::invalid_argument("make_split: duplicate dev ids");
  for (const auto &id : test_item_ids) {
    if (dev.count(id)) throw std::invalid_argument("make_split: test id " + id + " is a dev id");
  }
  std::vector<std::string> shuffled = dev_item_ids;
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(shuffled));
  SplitSpec split;
  split.seed = seed;
  split.train_ids.assign(shuffled.begin(), shuffled.begin() + kTrainItems);
  split.val_ids.assign(shuffled.begin() + kTrainItems, shuffled.end());
  split.test_ids = test_item_ids;
  return split;
}

namespace {

json prf_json(const PRF &s) {
  return json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

json score_json(const RougeScore &s) {
  return json{{"r1", prf_json(s.r1)}, {"r2", prf_json(s.r2)}, {"rl", prf_json(s.rl)}};
}

}  // namespace

json EvalReport::to_json() const {
  json items = json::array();
  for (const auto &it : per_item) {
    json j = score_json(it.score);
    j["item_id"] = it.item_id;
    items.push_back(std::move(j));
  }
  return json{{"per_item", std::move(items)},
              {"mean", score_json(mean)},
              {"config",
               {{"agg", options.aggregation == RefAggregation::kMax ? "max" : "mean"},
                {"stem", options.stem},
                {"items", per_item.size()}}}};
}

EvalReport evaluate_file(const std::string &candidates_path, const std::string &gold_path,
                         const RougeOptions &opts) {
  std::ifstream in(candidates_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open candidates file: " + candidates_path);
  std::vector<std::pair<std::string, std::string>> candidates;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      throw CorpusError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("item_id") || !j["item_id"].is_string() ||
        !j.contains("summary") || !j["summary"].is_string()) {
      throw CorpusError("candidate needs string fields \"item_id\" and \"summary\"", line_no);
    }
    auto id = j["item_id"].get<std::string>();
    if (!seen.insert(id).second) throw CorpusError("duplicate candidate for " + id, line_no);
    candidates.emplace_back(std::move(id), j["summary"].get<std::string>());
  }
  if (candidates.empty()) throw std::runtime_error("no candidates in " + candidates_path);

  std::map<std::string, std::vector<std::string>> refs;
  for (auto &g : load_gold(gold_path)) refs.emplace(g.item_id, std::move(g.references));

  std::vector<std::string> missing;
  for (const auto &[id, text] : candidates) {
    if (!refs.count(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    std::string ids;
    for (const auto &id : missing) ids += (ids.empty() ? "" : ", ") + id;
    throw std::runtime_error("candidate items missing from gold: " + ids);
  }

  EvalReport report;
  report.options = opts;
  for (const auto &[id, text] : candidates) {
    report.per_item.push_back({id, rouge(text, refs.at(id), opts)});
  }
  const double n = static_cast<double>(report.per_item.size());
  for (PRF RougeScore::*metric : {&RougeScore::r1, &RougeScore::r2, &RougeScore::rl}) {
    PRF &m = report.mean.*metric;
    for (const auto &it : report.per_item) {
      m.precision += (it.score.*metric).precision;
      m.recall += (it.score.*metric).recall;
      m.f1 += (it.score.*metric).f1;
    }
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
  }
  return report;
}

}  // namespace forge
