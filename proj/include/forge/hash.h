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

#ifndef FORGE_HASH_H_
#define FORGE_HASH_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include <sodium.h>

namespace forge {

// 128-bit BLAKE2b digest.
using Hash128 = std::array<uint8_t, 16>;

// Incremental hasher. Every field is length-prefixed so that
// ("ab", "c") and ("a", "bc") never collide.
class Hasher {
 public:
  Hasher();
  Hasher &add(std::string_view field);
  Hasher &add(uint64_t value);
  Hasher &add(double value);
  Hash128 finish();

 private:
  crypto_generichash_state state_;
  bool finished_ = false;
};

Hash128 hash_fields(std::initializer_list<std::string_view> fields);
std::string to_hex(const Hash128 &hash);

// First eight digest bytes, little-endian.
uint64_t hash64(std::string_view text);

}  // namespace forge

#endif  // FORGE_HASH_H_
