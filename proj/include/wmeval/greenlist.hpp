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

#include <span>

#include "wmeval/detection.hpp"
#include "wmeval/generate.hpp"
#include "wmeval/prob_dist.hpp"
#include "wmeval/wmcore.hpp"

namespace wmeval {

struct KgwParams {
  double gamma = 0.5;
  double delta = 2.0;
};

struct SweetParams {
  double gamma = 0.5;
  double delta = 2.0;
  double entropy_threshold = 0.9;  // nats
};

constexpr double kDefaultZThreshold = 4.0;

// Adds `delta` to the green tokens' logits and re-normalizes. Equivalent to
// multiplying their probabilities by e^delta, which preserves within-group
// ratios exactly.
ProbDist kgw_reweight(const ProbDist& dist, const Partition& partition,
                      double delta);

// kgw_reweight gated on the distribution's entropy: distributions at or
// below the threshold pass through unchanged.
ProbDist sweet_reweight(const ProbDist& dist, const Partition& partition,
                        const SweetParams& params);

GenHook kgw_hook(WatermarkKey key, const KgwParams& params);
GenHook sweet_hook(WatermarkKey key, const SweetParams& params);

// One-sided z-test on the green-token count over positions 1..len-1, each
// position's partition reseeded from its predecessor token.
// z = (N_G - gamma*N) / sqrt(N*gamma*(1-gamma)).
DetectionScore kgw_detect(const TokenSeq& text_ids, WatermarkKey key,
                          double gamma, double z_threshold,
                          int vocab_size);

// As kgw_detect but counting only positions whose entropy exceeds the gate.
// `entropies` is aligned with text_ids (entry t = entropy at position t);
// use recompute_entropies() when no generation record is available.
// Throws UndetectableError when no position passes the gate.
DetectionScore sweet_detect(const TokenSeq& text_ids,
                            std::span<const double> entropies,
                            WatermarkKey key, const SweetParams& params,
                            double z_threshold, int vocab_size);

// Detection-side entropy recomputation with the reference model. Entry t is
// the entropy of the model's prediction for position t given text[0..t).
std::vector<double> recompute_entropies(const NgramModel& model,
                                        const TokenSeq& text_ids);

}  // namespace wmeval
