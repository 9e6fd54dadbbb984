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

#include "forge/text.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "forge/hash.h"

namespace forge {

// Generated at configure time from data/stopwords_en.txt.
extern const char kEnglishStopwords[];

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_char(unsigned char c) {
  if (c >= 0x80) return true;
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '\'';
}

}  // namespace

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

size_t count_tokens(std::string_view text) {
  size_t n = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++n;
    }
  }
  return n;
}

std::string normalize_ws(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const auto &tok : whitespace_tokens(text)) {
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

std::string trim(std::string_view text) {
  size_t b = 0, e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (auto &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

size_t find_invalid_utf8(std::string_view text) {
  const auto *s = reinterpret_cast<const unsigned char *>(text.data());
  const size_t n = text.size();
  size_t i = 0;
  while (i < n) {
    const unsigned char c = s[i];
    if (c < 0x80) {
      ++i;
      continue;
    }
    size_t len;
    uint32_t cp;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > n) return i;
    for (size_t k = 1; k < len; ++k) {
      if ((s[i + k] & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (s[i + k] & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string_view::npos;
}

StopwordList StopwordList::parse(std::string_view contents) {
  StopwordList list;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    std::string w = ascii_lower(trim(line));
    if (!w.empty()) list.words_.insert(std::move(w));
  }
  std::vector<std::string> sorted(list.words_.begin(), list.words_.end());
  std::sort(sorted.begin(), sorted.end());
  Hasher h;
  for (const auto &w : sorted) h.add(w);
  list.digest_ = to_hex(h.finish());
  return list;
}

StopwordList StopwordList::from_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open stopword list: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const StopwordList &StopwordList::english() {
  static const StopwordList list = parse(kEnglishStopwords);
  return list;
}

bool StopwordList::contains(std::string_view word) const {
  return words_.count(std::string(word)) > 0;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    size_t b = 0, e = cur.size();
    while (b < e && cur[b] == '\'') ++b;
    while (e > b && cur[e - 1] == '\'') --e;
    if (e > b) out.push_back(cur.substr(b, e - b));
    cur.clear();
  };
  for (unsigned char c : text) {
    if (is_word_char(c)) {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                         : static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::set<std::string> content_words(std::string_view text, const StopwordList &stopwords) {
  std::set<std::string> out;
  for (auto &w : word_tokens(text)) {
    if (!stopwords.contains(w)) out.insert(std::move(w));
  }
  return out;
}

size_t overlap(std::string_view p, std::string_view q, const StopwordList &stopwords) {
  const auto a = content_words(p, stopwords);
  const auto b = content_words(q, stopwords);
  size_t n = 0;
  for (const auto &w : a) n += b.count(w);
  return n;
}

}  // namespace forge
