// Copyright 2026 The wmeval Authors.
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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wmeval/splitmix.hpp"
#include "wmeval/vocab.hpp"

namespace wmeval {

// Secret key shared between embedding and detection. All derived
// randomness is a pure function of (key, context window).
struct WatermarkKey {
  uint64_t secret = 0;
};

// Deterministic seed for the randomness at one generation step: a
// splitmix64 chain absorbing the key and then each context id in order.
// An empty context hashes the BOS id instead.
uint64_t hash_context(WatermarkKey key, std::span<const TokenId> context_ids);

// Seeded green/red split of the vocabulary. |green| = round(gamma * V).
class Partition {
 public:
  Partition(std::vector<char> green_mask, double gamma, int green_size);

  bool is_green(TokenId id) const {
    return green_mask_[static_cast<size_t>(id)] != 0;
  }
  int green_size() const { return green_size_; }
  int vocab_size() const { return static_cast<int>(green_mask_.size()); }
  double gamma() const { return gamma_; }

  std::vector<TokenId> green_ids() const;  // ascending
  std::vector<TokenId> red_ids() const;    // ascending

 private:
  std::vector<char> green_mask_;
  double gamma_;
  int green_size_;
};

// A bijection of 0..V-1. order()[i] is the token id at permuted slot i.
class Permutation {
 public:
  explicit Permutation(std::vector<TokenId> order);

  const std::vector<TokenId>& order() const { return order_; }
  int size() const { return static_cast<int>(order_.size()); }

  // Permuted slot holding token `id` (inverse lookup, O(V)).
  int slot_of(TokenId id) const;

 private:
  std::vector<TokenId> order_;
};

// Fisher-Yates shuffle of 0..V-1 driven by a splitmix64 stream; the first
// round(gamma * V) shuffled ids form the green set.
Partition seeded_partition(uint64_t seed, int vocab_size, double gamma);

// The full shuffle from the same generator.
Permutation seeded_permutation(uint64_t seed, int vocab_size);

}  // namespace wmeval
