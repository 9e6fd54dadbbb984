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

// Seeded pseudorandom draws that are bit-identical on every platform.
//
// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions do not, so bounded integers are drawn here by rejection
// sampling on the raw 64-bit output and shuffles are plain Fisher-Yates
// running from the last element down.

#ifndef FORGE_RANDOM_H_
#define FORGE_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace forge {

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound). bound must be > 0.
  uint64_t below(uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Per-item seed: run seed XOR a hash of the item id.
uint64_t derive_item_seed(uint64_t seed, std::string_view item_id);

}  // namespace forge

#endif  // FORGE_RANDOM_H_
