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

#include "wmeval/dipmark.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmeval {

ProbDist dip_reweight(const ProbDist& dist, const Permutation& perm,
                      double alpha) {
  if (perm.size() != dist.size())
    throw std::invalid_argument("permutation/distribution size mismatch");
  if (!(alpha >= 0.0 && alpha <= 0.5))
    throw std::invalid_argument("alpha must be in [0, 0.5]");
  if (alpha == 0.0) return dist;

  const auto& order = perm.order();
  Eigen::VectorXd out(dist.size());
  const double hi_boundary = 1.0 - alpha;
  double cum = 0.0;
  for (int slot = 0; slot < dist.size(); ++slot) {
    const TokenId tok = order[static_cast<size_t>(slot)];
    const double lo = cum;
    cum += dist[tok];
    // (1-a)*P^a + a*P^{1-a} telescopes to the raw interval mass above each
    // boundary; the scale factors cancel.
    const double above_alpha = std::max(0.0, cum - std::max(lo, alpha));
    const double above_hi = std::max(0.0, cum - std::max(lo, hi_boundary));
    out[tok] = above_alpha + above_hi;
  }
  return ProbDist::from_unnormalized(std::move(out));
}

TokenId dip_generate_step(const ProbDist& dist, WatermarkKey key,
                          TokenId prev_token, double alpha, SplitMix64& rng) {
  const uint64_t seed =
      hash_context(key, std::span<const TokenId>(&prev_token, 1));
  const Permutation perm = seeded_permutation(seed, dist.size());
  return multinomial_sample(dip_reweight(dist, perm, alpha), rng);
}

GenHook dipmark_hook(WatermarkKey key, const DipParams& params) {
  GenHook hook;
  hook.rewrite = [key, alpha = params.alpha](const ProbDist& dist, TokenId prev,
                                             int /*step*/) {
    const uint64_t seed = hash_context(key, std::span<const TokenId>(&prev, 1));
    return dip_reweight(dist, seeded_permutation(seed, dist.size()), alpha);
  };
  return hook;
}

DipDetection dip_detect(const TokenSeq& text_ids, WatermarkKey key,
                        double gamma, double z_threshold, int vocab_size) {
  if (text_ids.size() < 2)
    throw std::invalid_argument("detection needs at least 2 tokens");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must be in (0, 1)");

  // Green region: permuted slots at or past round(gamma * V).
  const int boundary = static_cast<int>(
      std::llround(gamma * static_cast<double>(vocab_size)));
  int green = 0;
  int scored = 0;
  for (int t = 1; t < text_ids.size(); ++t) {
    const TokenId prev = text_ids[t - 1];
    const uint64_t seed = hash_context(key, std::span<const TokenId>(&prev, 1));
    const Permutation perm = seeded_permutation(seed, vocab_size);
    ++scored;
    if (perm.slot_of(text_ids[t]) >= boundary) ++green;
  }
  const double phi =
      static_cast<double>(green) / scored - (1.0 - gamma);
  const double z =
      phi * std::sqrt(static_cast<double>(scored)) /
      std::sqrt(gamma * (1.0 - gamma));
  DipDetection result;
  result.score = make_detection_score(ScoreKind::ratio, z, z_threshold);
  result.phi = phi;
  return result;
}

}  // namespace wmeval
