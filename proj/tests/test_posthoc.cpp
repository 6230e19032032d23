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

#include <doctest.h>

#include <cmath>

#include "wmeval/posthoc.hpp"

using namespace wmeval;

namespace {

NgramModel skewed_model() {
  Vocab vocab;
  vocab.add("hot");
  vocab.add("warm");
  vocab.add("cold");
  NgramModel model(vocab, 1, 0.0);
  model.add_count({}, vocab.id("hot"), 90);
  model.add_count({}, vocab.id("warm"), 9);
  model.add_count({}, vocab.id("cold"), 1);
  model.finalize();
  return model;
}

}  // namespace

TEST_CASE("logrank_score: rank-1 tokens everywhere give zero") {
  const auto model = skewed_model();
  TokenSeq seq;
  for (int i = 0; i < 6; ++i) seq.push_back(model.vocab().id("hot"));
  CHECK(logrank_score(seq, model) == doctest::Approx(0.0));
}

TEST_CASE("logrank_score: matches the hand-sorted rank oracle") {
  const auto model = skewed_model();
  const TokenId hot = model.vocab().id("hot");
  const TokenId warm = model.vocab().id("warm");
  const TokenId cold = model.vocab().id("cold");
  // Ranks: hot=1, warm=2, cold=3 (unigram model, same at every position).
  TokenSeq seq;
  for (TokenId t : {hot, warm, cold, hot, warm}) seq.push_back(t);
  const double expected =
      (std::log(2.0) + std::log(3.0) + std::log(1.0) + std::log(2.0)) / 4.0;
  CHECK(logrank_score(seq, model) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("logrank_score: non-negative, zero only at all rank one") {
  const auto model = skewed_model();
  TokenSeq mixed;
  for (TokenId t : {model.vocab().id("hot"), model.vocab().id("warm"),
                    model.vocab().id("hot")})
    mixed.push_back(t);
  CHECK(logrank_score(mixed, model) > 0.0);

  TokenSeq tiny;
  tiny.push_back(0);
  CHECK_THROWS_AS(logrank_score(tiny, model), std::invalid_argument);
}

TEST_CASE("calibrate_logrank_threshold takes the strictest natural") {
  const auto model = skewed_model();
  TokenSeq low;
  for (int i = 0; i < 5; ++i) low.push_back(model.vocab().id("hot"));
  TokenSeq high;
  for (int i = 0; i < 5; ++i) high.push_back(model.vocab().id("cold"));
  const double threshold = calibrate_logrank_threshold({low, high}, model);
  CHECK(threshold == doctest::Approx(logrank_score(low, model)));
  // Nothing in the calibration sample is flagged at this threshold.
  CHECK_FALSE(logrank_detect(low, model, threshold).is_watermarked);
  CHECK_FALSE(logrank_detect(high, model, threshold).is_watermarked);
}

TEST_CASE("detectgpt_score: zero perturbation fraction degenerates to zero") {
  const auto model = skewed_model();
  TokenSeq seq;
  for (int i = 0; i < 8; ++i) seq.push_back(model.vocab().id("hot"));
  DetectGptParams params;
  params.perturb_fraction = 0.0;
  const DetectGptResult r = detectgpt_score(seq, model, params, 1);
  CHECK(r.degenerate);
  CHECK(r.score == doctest::Approx(0.0));
}

TEST_CASE("detectgpt_score: deterministic given the seed") {
  const auto model = skewed_model();
  TokenSeq seq;
  for (TokenId t : {2, 3, 2, 2, 4, 2, 3, 2}) seq.push_back(t);
  DetectGptParams params;
  const DetectGptResult a = detectgpt_score(seq, model, params, 42);
  const DetectGptResult b = detectgpt_score(seq, model, params, 42);
  CHECK(a.score == b.score);
  CHECK(a.degenerate == b.degenerate);
}

TEST_CASE("detectgpt_score: argmax text scores positive almost surely") {
  // Perturbing an all-argmax text can only lower the mean logp.
  const auto model = skewed_model();
  TokenSeq seq;
  for (int i = 0; i < 30; ++i) seq.push_back(model.vocab().id("hot"));
  DetectGptParams params;
  params.num_perturbations = 20;
  int positive = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    if (detectgpt_score(seq, model, params, seed).score > 0.0) ++positive;
  }
  CHECK(positive >= 95);
}

TEST_CASE("detectgpt thresholded verdict uses the curvature direction") {
  const auto model = skewed_model();
  TokenSeq seq;
  for (int i = 0; i < 30; ++i) seq.push_back(model.vocab().id("hot"));
  const DetectionScore score =
      detectgpt_detect(seq, model, DetectGptParams{}, 7, 0.0);
  CHECK(score.kind == ScoreKind::curvature);
  CHECK(score.is_watermarked == (score.statistic > 0.0));
}
