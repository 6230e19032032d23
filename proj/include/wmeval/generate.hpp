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

#include <functional>

#include "wmeval/genrecord.hpp"
#include "wmeval/ngram_model.hpp"
#include "wmeval/prob_dist.hpp"
#include "wmeval/splitmix.hpp"

namespace wmeval {

// Per-step watermarking hook. Exactly one of the two fields may be set:
//   rewrite  - transforms the model distribution; the loop then samples
//              multinomially from the result (KGW, SWEET, DiPmark).
//   sampler  - replaces sampling entirely and returns the token (EXP-edit).
// `prev` is the hash context (last token of prompt+output, BOS at start).
struct GenHook {
  std::function<ProbDist(const ProbDist& dist, TokenId prev, int step)> rewrite;
  std::function<TokenId(const ProbDist& dist, TokenId prev, int step)> sampler;
};

// Samples an index from `dist` using one uniform draw from `rng`.
TokenId multinomial_sample(const ProbDist& dist, SplitMix64& rng);

// Autoregressive generation loop. Records the entropy of the unmodified
// model distribution at every step, then applies the hook. Deterministic
// given (model, prompt, hook, rng_seed).
GenRecord generate(const NgramModel& model, const TokenSeq& prompt,
                   int max_tokens, const GenHook& hook, uint64_t rng_seed);

}  // namespace wmeval
