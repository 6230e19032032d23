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

#include "wmeval/generate.hpp"

#include <stdexcept>

namespace wmeval {

TokenId multinomial_sample(const ProbDist& dist, SplitMix64& rng) {
  const double u = rng.next_unit();
  double acc = 0.0;
  TokenId last_positive = -1;
  for (TokenId i = 0; i < dist.size(); ++i) {
    const double p = dist[i];
    if (p <= 0.0) continue;
    acc += p;
    last_positive = i;
    if (u < acc) return i;
  }
  // Rounding left u just beyond the accumulated mass.
  if (last_positive < 0) throw std::invalid_argument("distribution has no mass");
  return last_positive;
}

GenRecord generate(const NgramModel& model, const TokenSeq& prompt,
                   int max_tokens, const GenHook& hook, uint64_t rng_seed) {
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
  if (hook.rewrite && hook.sampler)
    throw std::invalid_argument("hook may set rewrite or sampler, not both");

  SplitMix64 rng(rng_seed);
  GenRecord rec;
  rec.prompt_ids = prompt;

  TokenSeq stream = prompt;
  for (int step = 0; step < max_tokens; ++step) {
    ProbDist dist = model.next_dist(stream);
    rec.entropies.push_back(dist.entropy_nats());
    const TokenId prev = stream.empty() ? Vocab::kBosId
                                        : stream[stream.size() - 1];
    TokenId tok;
    if (hook.sampler) {
      tok = hook.sampler(dist, prev, step);
    } else if (hook.rewrite) {
      tok = multinomial_sample(hook.rewrite(dist, prev, step), rng);
    } else {
      tok = multinomial_sample(dist, rng);
    }
    stream.push_back(tok);
    rec.output_ids.push_back(tok);
  }
  return rec;
}

}  // namespace wmeval
