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

#include "wmeval/posthoc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wmeval/generate.hpp"
#include "wmeval/splitmix.hpp"

namespace wmeval {

double logrank_score(const TokenSeq& seq, const NgramModel& model) {
  if (seq.size() < 2)
    throw std::invalid_argument("logrank needs at least 2 tokens");
  double total = 0.0;
  int n = 0;
  for (const auto& lr : model.log_prob_and_rank(seq)) {
    total += std::log(static_cast<double>(lr.rank));
    ++n;
  }
  return total / n;
}

DetectionScore logrank_detect(const TokenSeq& seq, const NgramModel& model,
                              double threshold) {
  return make_detection_score(ScoreKind::logrank, logrank_score(seq, model),
                              threshold);
}

double calibrate_logrank_threshold(const std::vector<TokenSeq>& naturals,
                                   const NgramModel& model) {
  if (naturals.empty())
    throw std::invalid_argument("calibration sample is empty");
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& seq : naturals) lo = std::min(lo, logrank_score(seq, model));
  return lo;
}

namespace {

double mean_logp(const TokenSeq& seq, const NgramModel& model) {
  double total = 0.0;
  int n = 0;
  for (const auto& lr : model.log_prob_and_rank(seq)) {
    total += lr.logp;
    ++n;
  }
  return total / n;
}

}  // namespace

DetectGptResult detectgpt_score(const TokenSeq& text, const NgramModel& model,
                                const DetectGptParams& params,
                                uint64_t rng_seed) {
  if (text.size() < 2)
    throw std::invalid_argument("detectgpt needs at least 2 tokens");
  if (params.num_perturbations < 2)
    throw std::invalid_argument("need at least 2 perturbations");

  const int len = text.size();
  const int n_replace = static_cast<int>(
      std::ceil(params.perturb_fraction * static_cast<double>(len)));
  const ProbDist unigram = model.next_dist(std::span<const TokenId>{});

  SplitMix64 rng(rng_seed);
  const double original = mean_logp(text, model);

  std::vector<double> perturbed(
      static_cast<size_t>(params.num_perturbations));
  std::vector<int> positions(static_cast<size_t>(len));
  for (auto& score : perturbed) {
    TokenSeq variant = text;
    // Partial Fisher-Yates picks n_replace distinct positions.
    std::iota(positions.begin(), positions.end(), 0);
    for (int i = 0; i < n_replace; ++i) {
      const auto j = static_cast<size_t>(
          i + static_cast<int>(rng.next_below(
                  static_cast<uint64_t>(len - i))));
      std::swap(positions[static_cast<size_t>(i)], positions[j]);
      variant.ids[static_cast<size_t>(positions[static_cast<size_t>(i)])] =
          multinomial_sample(unigram, rng);
    }
    score = mean_logp(variant, model);
  }

  const double mean =
      std::accumulate(perturbed.begin(), perturbed.end(), 0.0) /
      static_cast<double>(perturbed.size());
  double ss = 0.0;
  for (double s : perturbed) ss += (s - mean) * (s - mean);
  const double stdev =
      std::sqrt(ss / static_cast<double>(perturbed.size() - 1));

  DetectGptResult result;
  result.degenerate = stdev == 0.0;
  result.score = (original - mean) / (stdev + params.epsilon);
  return result;
}

DetectionScore detectgpt_detect(const TokenSeq& text, const NgramModel& model,
                                const DetectGptParams& params,
                                uint64_t rng_seed, double threshold) {
  const DetectGptResult r = detectgpt_score(text, model, params, rng_seed);
  return make_detection_score(ScoreKind::curvature, r.score, threshold);
}

}  // namespace wmeval
