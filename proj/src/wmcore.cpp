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

#include "wmeval/wmcore.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wmeval {

uint64_t hash_context(WatermarkKey key, std::span<const TokenId> context_ids) {
  uint64_t state = key.secret;
  uint64_t h = splitmix64_next(state);
  if (context_ids.empty()) {
    state = h ^ static_cast<uint64_t>(Vocab::kBosId);
    return splitmix64_next(state);
  }
  for (TokenId id : context_ids) {
    state = h ^ static_cast<uint64_t>(static_cast<uint32_t>(id));
    h = splitmix64_next(state);
  }
  return h;
}

Partition::Partition(std::vector<char> green_mask, double gamma,
                     int green_size)
    : green_mask_(std::move(green_mask)),
      gamma_(gamma),
      green_size_(green_size) {}

std::vector<TokenId> Partition::green_ids() const {
  std::vector<TokenId> out;
  out.reserve(static_cast<size_t>(green_size_));
  for (TokenId id = 0; id < vocab_size(); ++id)
    if (is_green(id)) out.push_back(id);
  return out;
}

std::vector<TokenId> Partition::red_ids() const {
  std::vector<TokenId> out;
  out.reserve(static_cast<size_t>(vocab_size() - green_size_));
  for (TokenId id = 0; id < vocab_size(); ++id)
    if (!is_green(id)) out.push_back(id);
  return out;
}

Permutation::Permutation(std::vector<TokenId> order) : order_(std::move(order)) {
  if (order_.empty()) throw std::invalid_argument("empty permutation");
}

int Permutation::slot_of(TokenId id) const {
  for (int i = 0; i < size(); ++i)
    if (order_[static_cast<size_t>(i)] == id) return i;
  throw std::out_of_range("token id not in permutation");
}

Permutation seeded_permutation(uint64_t seed, int vocab_size) {
  if (vocab_size < 1) throw std::invalid_argument("vocab_size must be >= 1");
  std::vector<TokenId> order(static_cast<size_t>(vocab_size));
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  for (int i = vocab_size - 1; i > 0; --i) {
    const auto j = static_cast<size_t>(
        rng.next_below(static_cast<uint64_t>(i) + 1));
    std::swap(order[static_cast<size_t>(i)], order[j]);
  }
  return Permutation(std::move(order));
}

Partition seeded_partition(uint64_t seed, int vocab_size, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must be in (0, 1)");
  Permutation perm = seeded_permutation(seed, vocab_size);
  const int green_size =
      static_cast<int>(std::llround(gamma * static_cast<double>(vocab_size)));
  std::vector<char> mask(static_cast<size_t>(vocab_size), 0);
  for (int i = 0; i < green_size; ++i)
    mask[static_cast<size_t>(perm.order()[static_cast<size_t>(i)])] = 1;
  return Partition(std::move(mask), gamma, green_size);
}

}  // namespace wmeval
