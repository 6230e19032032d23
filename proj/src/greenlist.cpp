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

#include "wmeval/greenlist.hpp"

#include <cmath>
#include <stdexcept>

namespace wmeval {

ProbDist kgw_reweight(const ProbDist& dist, const Partition& partition,
                      double delta) {
  if (partition.vocab_size() != dist.size())
    throw std::invalid_argument("partition/distribution size mismatch");
  if (delta == 0.0) return dist;
  const double boost = std::exp(delta);
  Eigen::VectorXd w = dist.probs();
  for (TokenId i = 0; i < dist.size(); ++i)
    if (partition.is_green(i)) w[i] *= boost;
  return ProbDist::from_unnormalized(std::move(w));
}

ProbDist sweet_reweight(const ProbDist& dist, const Partition& partition,
                        const SweetParams& params) {
  if (dist.entropy_nats() <= params.entropy_threshold) return dist;
  return kgw_reweight(dist, partition, params.delta);
}

GenHook kgw_hook(WatermarkKey key, const KgwParams& params) {
  GenHook hook;
  hook.rewrite = [key, params](const ProbDist& dist, TokenId prev,
                               int /*step*/) {
    const uint64_t seed = hash_context(key, std::span<const TokenId>(&prev, 1));
    return kgw_reweight(dist, seeded_partition(seed, dist.size(), params.gamma),
                        params.delta);
  };
  return hook;
}

GenHook sweet_hook(WatermarkKey key, const SweetParams& params) {
  GenHook hook;
  hook.rewrite = [key, params](const ProbDist& dist, TokenId prev,
                               int /*step*/) {
    if (dist.entropy_nats() <= params.entropy_threshold) return dist;
    const uint64_t seed = hash_context(key, std::span<const TokenId>(&prev, 1));
    return kgw_reweight(dist, seeded_partition(seed, dist.size(), params.gamma),
                        params.delta);
  };
  return hook;
}

namespace {

// Green count over positions 1..len-1, optionally gated by entropy.
struct GreenCount {
  int green = 0;
  int scored = 0;
};

GreenCount count_green(const TokenSeq& text_ids, WatermarkKey key,
                       double gamma, int vocab_size,
                       std::span<const double> entropies, double gate) {
  GreenCount out;
  for (int t = 1; t < text_ids.size(); ++t) {
    if (!entropies.empty() &&
        entropies[static_cast<size_t>(t)] <= gate)
      continue;
    const TokenId prev = text_ids[t - 1];
    const uint64_t seed = hash_context(key, std::span<const TokenId>(&prev, 1));
    const Partition part = seeded_partition(seed, vocab_size, gamma);
    ++out.scored;
    if (part.is_green(text_ids[t])) ++out.green;
  }
  return out;
}

double green_z(int green, int scored, double gamma) {
  return (green - gamma * scored) /
         std::sqrt(scored * gamma * (1.0 - gamma));
}

}  // namespace

DetectionScore kgw_detect(const TokenSeq& text_ids, WatermarkKey key,
                          double gamma, double z_threshold, int vocab_size) {
  if (text_ids.size() < 2)
    throw std::invalid_argument("detection needs at least 2 tokens");
  const GreenCount c = count_green(text_ids, key, gamma, vocab_size, {}, 0.0);
  return make_detection_score(ScoreKind::z, green_z(c.green, c.scored, gamma),
                              z_threshold);
}

DetectionScore sweet_detect(const TokenSeq& text_ids,
                            std::span<const double> entropies,
                            WatermarkKey key, const SweetParams& params,
                            double z_threshold, int vocab_size) {
  if (text_ids.size() < 2)
    throw std::invalid_argument("detection needs at least 2 tokens");
  if (static_cast<int>(entropies.size()) != text_ids.size())
    throw std::invalid_argument("entropies not aligned with text");
  const GreenCount c = count_green(text_ids, key, params.gamma, vocab_size,
                                   entropies, params.entropy_threshold);
  if (c.scored == 0)
    throw UndetectableError("no position above the entropy gate");
  return make_detection_score(
      ScoreKind::z, green_z(c.green, c.scored, params.gamma), z_threshold);
}

std::vector<double> recompute_entropies(const NgramModel& model,
                                        const TokenSeq& text_ids) {
  return model.per_token_entropies(text_ids);
}

}  // namespace wmeval
