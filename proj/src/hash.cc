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

#include "forge/hash.h"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace forge {

namespace {

void ensure_sodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw std::runtime_error("libsodium initialization failed");
}

void put_le64(unsigned char *out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

}  // namespace

Hasher::Hasher() {
  ensure_sodium();
  crypto_generichash_init(&state_, nullptr, 0, 16);
}

Hasher &Hasher::add(std::string_view field) {
  unsigned char len[8];
  put_le64(len, field.size());
  crypto_generichash_update(&state_, len, sizeof(len));
  crypto_generichash_update(&state_, reinterpret_cast<const unsigned char *>(field.data()),
                            field.size());
  return *this;
}

Hasher &Hasher::add(uint64_t value) {
  unsigned char buf[8];
  put_le64(buf, value);
  return add(std::string_view(reinterpret_cast<const char *>(buf), sizeof(buf)));
}

Hasher &Hasher::add(double value) { return add(std::bit_cast<uint64_t>(value)); }

Hash128 Hasher::finish() {
  if (finished_) throw std::logic_error("Hasher::finish called twice");
  finished_ = true;
  Hash128 out{};
  crypto_generichash_final(&state_, out.data(), out.size());
  return out;
}

Hash128 hash_fields(std::initializer_list<std::string_view> fields) {
  Hasher h;
  for (auto f : fields) h.add(f);
  return h.finish();
}

std::string to_hex(const Hash128 &hash) {
  static const char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(hash.size() * 2);
  for (uint8_t b : hash) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

uint64_t hash64(std::string_view text) {
  const Hash128 h = hash_fields({text});
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | h[i];
  return v;
}

}  // namespace forge
