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

#include "forge/corpus.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "forge/text.h"

namespace forge {

using nlohmann::json;

namespace {

std::string require_string(const json &obj, const char *key, size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw CorpusError(std::string("missing or non-string field \"") + key + "\"", line_no);
  }
  return it->get<std::string>();
}

json parse_json_line(const std::string &line, size_t line_no) {
  const size_t bad = find_invalid_utf8(line);
  if (bad != std::string::npos) {
    throw CorpusError("invalid UTF-8 at byte " + std::to_string(bad), line_no);
  }
  try {
    return json::parse(line);
  } catch (const json::parse_error &e) {
    throw CorpusError(std::string("malformed JSON: ") + e.what(), line_no);
  }
}

bool is_blank(const std::string &line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

void to_json(json &j, const SilverRecord &r) {
  json selected = json::array();
  for (const auto &s : r.selected) {
    selected.push_back({{"text", s.text},
                        {"score", s.score},
                        {"support_fraction", s.support_fraction},
                        {"support_review_ids", s.support_review_ids},
                        {"source_review_id", s.source_review_id}});
  }
  j = json{{"item_id", r.item_id},
           {"summary_text", r.summary_text},
           {"selected", std::move(selected)},
           {"source_review_ids", r.source_review_ids},
           {"config_fingerprint", r.config_fingerprint},
           {"flags", r.flags}};
}

void from_json(const json &j, SilverRecord &r) {
  j.at("item_id").get_to(r.item_id);
  j.at("summary_text").get_to(r.summary_text);
  r.selected.clear();
  for (const auto &s : j.at("selected")) {
    SelectedProposition p;
    s.at("text").get_to(p.text);
    s.at("score").get_to(p.score);
    s.at("support_fraction").get_to(p.support_fraction);
    s.at("support_review_ids").get_to(p.support_review_ids);
    s.at("source_review_id").get_to(p.source_review_id);
    r.selected.push_back(std::move(p));
  }
  j.at("source_review_ids").get_to(r.source_review_ids);
  j.at("config_fingerprint").get_to(r.config_fingerprint);
  r.flags = j.value("flags", std::vector<std::string>{});
}

Review parse_review_line(const std::string &line, size_t line_no) {
  const json obj = parse_json_line(line, line_no);
  if (!obj.is_object()) throw CorpusError("record is not a JSON object", line_no);
  Review r{require_string(obj, "item_id", line_no), require_string(obj, "review_id", line_no),
           require_string(obj, "text", line_no)};
  if (trim(r.text).empty()) throw CorpusError("empty review text", line_no);
  return r;
}

CorpusReader::CorpusReader(const std::string &path) : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw std::runtime_error("cannot open corpus: " + path);
}

std::optional<Review> CorpusReader::read_review() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (is_blank(line)) continue;
    return parse_review_line(line, line_no_);
  }
  return std::nullopt;
}

std::optional<Item> CorpusReader::next() {
  if (!pending_) pending_ = read_review();
  if (!pending_) return std::nullopt;

  Item item;
  item.item_id = pending_->item_id;
  if (started_ && item.item_id < last_item_id_) {
    throw CorpusError("item_id \"" + item.item_id + "\" follows \"" + last_item_id_ +
                          "\"; input must be sorted by item_id (see `forge sort`)",
                      line_no_);
  }
  started_ = true;
  last_item_id_ = item.item_id;

  std::unordered_set<std::string> seen;
  while (pending_ && pending_->item_id == item.item_id) {
    if (!seen.insert(pending_->review_id).second) {
      throw CorpusError("duplicate review (" + item.item_id + ", " + pending_->review_id + ")",
                        line_no_);
    }
    item.reviews.push_back(std::move(*pending_));
    pending_ = read_review();
  }
  return item;
}

LoadedCorpus load_corpus(const std::string &path, size_t min_reviews) {
  LoadedCorpus out;
  CorpusReader reader(path);
  while (auto item = reader.next()) {
    if (item->reviews.size() < min_reviews) {
      ++out.excluded;
    } else {
      out.items.push_back(std::move(*item));
    }
  }
  return out;
}

std::vector<GoldEvalItem> load_gold(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open gold file: " + path);
  std::vector<GoldEvalItem> out;
  std::set<std::string> ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const json obj = parse_json_line(line, line_no);
    if (!obj.is_object()) throw CorpusError("record is not a JSON object", line_no);
    GoldEvalItem g;
    g.item_id = require_string(obj, "item_id", line_no);
    if (!ids.insert(g.item_id).second) throw CorpusError("duplicate item " + g.item_id, line_no);
    auto refs = obj.find("references");
    if (refs == obj.end() || !refs->is_array() || refs->empty()) {
      throw CorpusError("\"references\" must be a non-empty array", line_no);
    }
    for (const auto &r : *refs) {
      if (!r.is_string() || trim(r.get<std::string>()).empty()) {
        throw CorpusError("references must be non-empty strings", line_no);
      }
      g.references.push_back(r.get<std::string>());
    }
    if (auto revs = obj.find("reviews"); revs != obj.end()) {
      if (!revs->is_array()) throw CorpusError("\"reviews\" must be an array", line_no);
      for (const auto &r : *revs) {
        if (!r.is_object()) throw CorpusError("review entries must be objects", line_no);
        g.reviews.push_back({g.item_id, require_string(r, "review_id", line_no),
                             require_string(r, "text", line_no)});
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

size_t sort_corpus(const std::string &in_path, const std::string &out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus: " + in_path);
  // Keeps raw lines so that records are copied byte for byte.
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    Review r = parse_review_line(line, line_no);
    rows.emplace_back(std::move(r.item_id), std::move(line));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  for (const auto &[id, raw] : rows) out << raw << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + out_path);
  return rows.size();
}

void check_silver_structure(const SilverRecord &record) {
  auto fail = [&](const std::string &why) {
    throw std::invalid_argument("silver record " + record.item_id + ": " + why);
  };
  std::set<std::string> provenance;
  for (size_t i = 0; i < record.selected.size(); ++i) {
    const auto &s = record.selected[i];
    if (s.score != s.support_review_ids.size()) fail("score differs from support size");
    if (!(s.support_fraction >= 0.0 && s.support_fraction <= 1.0)) {
      fail("support_fraction outside [0, 1]");
    }
    if (i > 0 && s.score > record.selected[i - 1].score) fail("scores not non-increasing");
    provenance.insert(s.source_review_id);
  }
  std::set<std::string> sources;
  for (const auto &id : record.source_review_ids) {
    if (!sources.insert(id).second) fail("duplicate source review " + id);
    if (provenance.count(id)) fail("source review " + id + " is a provenance review");
  }
}

std::string silver_line(const SilverRecord &record) { return json(record).dump(); }

void write_silver(const std::vector<SilverRecord> &records, const std::string &path) {
  for (const auto &r : records) check_silver_structure(r);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto &r : records) out << silver_line(r) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<SilverRecord> read_silver(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open silver file: " + path);
  std::vector<SilverRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const json obj = parse_json_line(line, line_no);
    try {
      out.push_back(obj.get<SilverRecord>());
    } catch (const json::exception &e) {
      throw CorpusError(std::string("bad silver record: ") + e.what(), line_no);
    }
  }
  return out;
}

}  // namespace forge
