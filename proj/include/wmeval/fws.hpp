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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmeval/factuality.hpp"
#include "wmeval/ngram_model.hpp"
#include "wmeval/similarity.hpp"

namespace wmeval {

// Coherence / relevance (or completeness) / factual accuracy, each in [0,1].
struct AspectScores {
  double coherence = 0.0;
  double relevance = 0.0;
  double factual_accuracy = 0.0;
};

// Weights for the factuality-weighted score. Valid configs satisfy
// 2*alpha + beta = 1 so unit aspect scores give FWS = 1.
struct FwsConfig {
  double alpha = 0.4;
  double beta = 0.2;

  // Rescales (a, b) so that 2a + b = 1 exactly.
  static FwsConfig normalized(double a, double b);
};

// alpha * (relevance + factual_accuracy) + beta * coherence.
double fws(const AspectScores& scores, const FwsConfig& config);

// (raw - min) / (max - min).
double normalize_likert(double raw, double scale_min, double scale_max);

// The five weighting configurations of the sensitivity analysis, from
// coherence-heavy (1:2) to factuality-heavy (6:1), renormalized exactly.
std::vector<FwsConfig> default_sweep_configs();

struct SweepRow {
  FwsConfig config;
  double pearson_r = 0.0;
  bool defined = true;  // false when the correlation is undefined
};

// FWS-vs-human Pearson correlation for each configuration. Undefined
// correlations (constant inputs) are flagged, not thrown.
std::vector<SweepRow> sensitivity_sweep(std::span<const AspectScores> scores,
                                        std::span<const double> human,
                                        std::span<const FwsConfig> configs);

// Aspect triple from automatic metrics: coherence from an inverse-log
// perplexity transform, relevance from cosine similarity, factual accuracy
// from the hallucination rate. All clipped to [0, 1].
AspectScores auto_aspects(double perplexity, double similarity,
                          double hallucination_rate);

// One row of the human-rating CSV (header:
// item_id,rater_id,coherence,relevance,factual_accuracy; 1-5 integers).
struct HumanRating {
  std::string item_id;
  std::string rater_id;
  double coherence = 0.0;
  double relevance = 0.0;
  double factual_accuracy = 0.0;
};

std::vector<HumanRating> load_human_ratings_csv(
    const std::filesystem::path& path);

struct AggregatedRating {
  std::string item_id;
  AspectScores normalized;  // rater-averaged, Likert-normalized to [0,1]
  int rater_count = 0;
};

// Averages the raters of each item (file order preserved) and normalizes
// the 1-5 scale to [0, 1].
std::vector<AggregatedRating> aggregate_ratings(
    const std::vector<HumanRating>& ratings);

}  // namespace wmeval
