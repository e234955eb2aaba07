// Copyright 2026 The Chalset Authors.
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

#ifndef CHALSET_RANDOM_HPP_
#define CHALSET_RANDOM_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace chalset {

// SplitMix64. Chosen over <random> engines and distributions because the
// exact output sequence is part of the session file contract and must be
// identical on every platform and standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform in [0, bound) by rejection; bound must be > 0.
  std::uint64_t bounded(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// SplitMix64 output finalizer.
std::uint64_t mix64(std::uint64_t x);

// 64-bit FNV-1a over the UTF-8 bytes.
std::uint64_t fnv1a64(std::string_view bytes);

// Per-annotator sub-seed: mix64(master_seed ^ mix64(fnv1a64(annotator_id))).
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view label);

// Fisher-Yates, iterating i = n-1 .. 1 and swapping with bounded(i + 1).
template <typename T>
void shuffle(std::span<T> values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.bounded(i));
    using std::swap;
    swap(values[i - 1], values[j]);
  }
}

}  // namespace chalset

#endif  // CHALSET_RANDOM_HPP_
