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

#include "wmeval/detection.hpp"
#include "wmeval/generate.hpp"
#include "wmeval/prob_dist.hpp"
#include "wmeval/wmcore.hpp"

namespace wmeval {

struct DipParams {
  double alpha = 0.45;         // reweight parameter, in [0, 0.5]
  double gamma_detect = 0.5;   // green list separator for detection
};

// Distribution-preserving reweight. With probabilities arranged in
// permutation order and C_i their cumulative sums, the output at permuted
// slot i is the interval (C_{i-1}, C_i] mass above alpha plus its mass
// above 1-alpha; a token straddling a boundary contributes the part above
// it proportionally. Averaged over all permutations this reproduces the
// input distribution exactly.
ProbDist dip_reweight(const ProbDist& dist, const Permutation& perm,
                      double alpha);

// One generation step: permutation seeded from (key, prev_token), then a
// multinomial draw from the reweighted distribution.
TokenId dip_generate_step(const ProbDist& dist, WatermarkKey key,
                          TokenId prev_token, double alpha, SplitMix64& rng);

GenHook dipmark_hook(WatermarkKey key, const DipParams& params);

struct DipDetection {
  DetectionScore score;  // statistic = binomial z for threshold comparability
  double phi = 0.0;      // green token ratio L_G/n - (1-gamma)
};

// Green-token-ratio test: per position the permutation is recomputed from
// the previous token and the last (1-gamma)*V permuted slots count as green.
DipDetection dip_detect(const TokenSeq& text_ids, WatermarkKey key,
                        double gamma, double z_threshold, int vocab_size);

}  // namespace wmeval
