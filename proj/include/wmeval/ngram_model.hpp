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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wmeval/prob_dist.hpp"
#include "wmeval/vocab.hpp"

namespace wmeval {

struct LogpRank {
  double logp;  // ln P(y_t | y_<t)
  int rank;     // 1-based, descending probability, ties by ascending id
};

// Interpolated additive-smoothed n-gram language model.
//
// Conditionals mix the additive-smoothed estimates of every order whose
// context was observed, with uniform interpolation weights; order 1 (empty
// context) is always observed, so every context yields a valid distribution.
// Immutable after finalize(); queries are pure and safe for concurrent use.
class NgramModel {
 public:
  NgramModel(Vocab vocab, int order, double smoothing_k);

  // Tokenizes the corpus (one document per string), builds the vocabulary,
  // and counts n-grams of all orders up to `order`. Documents are padded
  // with a leading BOS. Throws std::invalid_argument on an empty corpus,
  // order outside [1,5], or smoothing_k <= 0.
  static NgramModel train(const std::vector<std::string>& corpus, int order,
                          double smoothing_k);

  // Count accumulation for directly constructed models (tests, tools).
  // `seq` is counted as-is; no BOS padding is added.
  void add_sequence(std::span<const TokenId> seq);
  void add_count(std::span<const TokenId> context, TokenId token,
                 uint64_t count = 1);
  void finalize();

  // Next-token distribution given the last (order-1) tokens of `context`.
  ProbDist next_dist(std::span<const TokenId> context) const;
  ProbDist next_dist(const TokenSeq& context) const {
    return next_dist(std::span<const TokenId>(context.ids));
  }

  // For positions t = 1..len-1: ln P(y_t | y_<t) and the 1-based rank of
  // y_t in the predicted distribution.
  std::vector<LogpRank> log_prob_and_rank(const TokenSeq& seq) const;

  // exp(-mean logp) over positions 1..len-1. Throws std::invalid_argument
  // for sequences shorter than 2 tokens.
  double perplexity(const TokenSeq& seq) const;

  // Per-position entropies, aligned with `seq`: entry t for t >= 1 is the
  // entropy of next_dist(seq[0..t)); entry 0 uses the empty context.
  std::vector<double> per_token_entropies(const TokenSeq& seq) const;

  const Vocab& vocab() const { return vocab_; }
  int order() const { return order_; }
  double smoothing_k() const { return smoothing_k_; }

  // Versioned binary table dump; round-trips bit-exactly.
  void save(const std::filesystem::path& path) const;
  static NgramModel load(const std::filesystem::path& path);

  friend bool operator==(const NgramModel&, const NgramModel&);

 private:
  struct ContextCounts {
    uint64_t total = 0;
    // Sorted by token id after finalize().
    std::vector<std::pair<TokenId, uint64_t>> tokens;
  };
  using Table = std::map<std::vector<TokenId>, ContextCounts>;

  const ContextCounts* find_context(int ctx_len,
                                    std::span<const TokenId> ctx) const;

  Vocab vocab_;
  int order_;
  double smoothing_k_;
  std::vector<Table> tables_;  // tables_[n] holds contexts of length n
  bool finalized_ = false;
};

}  // namespace wmeval
