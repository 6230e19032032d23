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

#include <string>
#include <vector>

namespace wmeval {

enum class ScoreDirection { higher_is_positive, lower_is_positive };

// Watermarked (positive) vs natural/unwatermarked (negative) scores.
struct ScorePair {
  std::vector<double> positives;
  std::vector<double> negatives;
  ScoreDirection direction = ScoreDirection::higher_is_positive;
};

// TPR at the strictest threshold admitting zero false positives: the
// threshold is the extreme negative score and positives must lie strictly
// beyond it.
double tpr_at_fpr0(const ScorePair& pairs);

// Probability that a random positive outranks a random negative, ties at
// 0.5 (Mann-Whitney), computed from midranks.
double auroc(const ScorePair& pairs);

// ROUGE-N F-measure with clipped n-gram counts over the word tokenizer.
// Returns 0 when either side has no n-grams.
double rouge_n(const std::string& candidate, const std::string& reference,
               int n);

// LCS-based ROUGE-L F-measure (harmonic mean of LCS precision and recall).
double rouge_l(const std::string& candidate, const std::string& reference);

// Bag-of-tokens F1 with clipped counts.
double token_f1(const std::string& candidate, const std::string& reference);

}  // namespace wmeval
