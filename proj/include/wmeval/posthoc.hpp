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
#include <vector>

#include "wmeval/detection.hpp"
#include "wmeval/ngram_model.hpp"

namespace wmeval {

// Mean ln(rank) over positions 1..len-1. Model-generated text tends to sit
// at low ranks, so smaller is more model-like. Always >= 0; 0 iff every
// scored token is rank 1.
double logrank_score(const TokenSeq& seq, const NgramModel& model);

DetectionScore logrank_detect(const TokenSeq& seq, const NgramModel& model,
                              double threshold);

// Strictest-natural calibration: the minimum logrank over a held-out
// natural sample, so nothing in the sample is flagged.
double calibrate_logrank_threshold(const std::vector<TokenSeq>& naturals,
                                   const NgramModel& model);

struct DetectGptParams {
  int num_perturbations = 20;
  double perturb_fraction = 0.15;
  double epsilon = 1e-8;
};

struct DetectGptResult {
  double score = 0.0;
  bool degenerate = false;  // all perturbation scores identical
};

// Curvature statistic: [logp(text) - mean logp(perturbations)] / (std + eps)
// with mean-logp scoring and perturbations that resample ceil(fraction*len)
// positions from the model's unigram distribution.
DetectGptResult detectgpt_score(const TokenSeq& text, const NgramModel& model,
                                const DetectGptParams& params,
                                uint64_t rng_seed);

DetectionScore detectgpt_detect(const TokenSeq& text, const NgramModel& model,
                                const DetectGptParams& params,
                                uint64_t rng_seed, double threshold);

}  // namespace wmeval
