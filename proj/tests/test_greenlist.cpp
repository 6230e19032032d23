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

#include "wmeval/greenlist.hpp"

using namespace wmeval;

namespace {

Partition mask_partition(std::vector<char> mask, double gamma) {
  int green = 0;
  for (char c : mask) green += c != 0;
  return Partition(std::move(mask), gamma, green);
}

// Builds a token stream whose scored positions have exactly `n_green` green
// tokens followed by red ones, under (key, gamma, V).
TokenSeq crafted_stream(WatermarkKey key, double gamma, int vocab_size,
                        int n_scored, int n_green) {
  TokenSeq seq;
  seq.push_back(0);
  for (int t = 0; t < n_scored; ++t) {
    const TokenId prev = seq[seq.size() - 1];
    const uint64_t seed = hash_context(key, std::span<const TokenId>(&prev, 1));
    const Partition part = seeded_partition(seed, vocab_size, gamma);
    const bool want_green = t < n_green;
    TokenId chosen = -1;
    for (TokenId cand = 0; cand < vocab_size; ++cand) {
      if (part.is_green(cand) == want_green) {
        chosen = cand;
        break;
      }
    }
    REQUIRE(chosen >= 0);
    seq.push_back(chosen);
  }
  return seq;
}

}  // namespace

TEST_CASE("kgw_reweight: delta 0 is the exact identity") {
  Eigen::VectorXd p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  const ProbDist dist(p);
  const Partition part = mask_partition({1, 0, 1, 0}, 0.5);
  const ProbDist out = kgw_reweight(dist, part, 0.0);
  CHECK((out.probs() - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kgw_reweight: uniform 4 tokens, 2 green, delta ln2") {
  // Hand softmax: green weights double, so greens get 1/3 and reds 1/6.
  const ProbDist dist(Eigen::VectorXd::Constant(4, 0.25));
  const Partition part = mask_partition({1, 1, 0, 0}, 0.5);
  const ProbDist out = kgw_reweight(dist, part, std::log(2.0));
  CHECK(out[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(out[2] == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(out[3] == doctest::Approx(1.0 / 6).epsilon(1e-12));
}

TEST_CASE("kgw_reweight: huge delta sends all mass green") {
  Eigen::VectorXd p(6);
  p << 0.3, 0.1, 0.2, 0.15, 0.15, 0.1;
  const Partition part = mask_partition({0, 1, 0, 1, 0, 0}, 1.0 / 3);
  const ProbDist out = kgw_reweight(ProbDist(p), part, 50.0);
  CHECK(out[1] + out[3] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kgw_reweight preserves within-group probability ratios") {
  Eigen::VectorXd p(5);
  p << 0.1, 0.25, 0.05, 0.4, 0.2;
  const Partition part = mask_partition({1, 1, 0, 0, 1}, 0.6);
  const ProbDist out = kgw_reweight(ProbDist(p), part, 1.7);
  CHECK(out[0] / out[1] == doctest::Approx(p[0] / p[1]).epsilon(1e-12));
  CHECK(out[0] / out[4] == doctest::Approx(p[0] / p[4]).epsilon(1e-12));
  CHECK(out[2] / out[3] == doctest::Approx(p[2] / p[3]).epsilon(1e-12));
}

TEST_CASE("sweet_reweight: entropy gate") {
  const Partition part = mask_partition({1, 1, 0, 0}, 0.5);
  SweetParams params;
  params.entropy_threshold = 0.9;
  params.delta = 2.0;

  // Low entropy: unchanged.
  Eigen::VectorXd low(4);
  low << 0.94, 0.02, 0.02, 0.02;  // entropy ~0.3
  const ProbDist low_dist(low);
  CHECK(low_dist.entropy_nats() < 0.9);
  CHECK((sweet_reweight(low_dist, part, params).probs() - low)
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // High entropy: equals the KGW reweight.
  const ProbDist uniform(Eigen::VectorXd::Constant(4, 0.25));
  CHECK(uniform.entropy_nats() > 0.9);
  const ProbDist gated = sweet_reweight(uniform, part, params);
  const ProbDist plain = kgw_reweight(uniform, part, params.delta);
  CHECK((gated.probs() - plain.probs()).cwiseAbs().maxCoeff() == 0.0);

  // Point mass has entropy 0: unchanged for any delta.
  Eigen::VectorXd point = Eigen::VectorXd::Zero(4);
  point[2] = 1.0;
  params.delta = 50.0;
  CHECK((sweet_reweight(ProbDist(point), part, params).probs() - point)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("kgw_detect: crafted green counts give exact z-scores") {
  const WatermarkKey key{31337};
  const int V = 64;

  // N=100 scored, 50 green: z = 0.
  const TokenSeq even = crafted_stream(key, 0.5, V, 100, 50);
  CHECK(kgw_detect(even, key, 0.5, 4.0, V).statistic ==
        doctest::Approx(0.0).epsilon(1e-12));

  // N=100, 75 green: z = 25/5 = 5.
  const TokenSeq hot = crafted_stream(key, 0.5, V, 100, 75);
  const DetectionScore hot_score = kgw_detect(hot, key, 0.5, 4.0, V);
  CHECK(hot_score.statistic == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(hot_score.is_watermarked);

  // All green, N=16: z = (16-8)/2 = 4 and 4 > threshold fails (strict).
  const TokenSeq full = crafted_stream(key, 0.5, V, 16, 16);
  const DetectionScore full_score = kgw_detect(full, key, 0.5, 4.0, V);
  CHECK(full_score.statistic == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_FALSE(full_score.is_watermarked);

  TokenSeq too_short;
  too_short.push_back(0);
  CHECK_THROWS_AS(kgw_detect(too_short, key, 0.5, 4.0, V),
                  std::invalid_argument);
}

TEST_CASE("kgw_detect: null calibration on iid uniform streams") {
  const WatermarkKey key{2024};
  const int V = 64;
  SplitMix64 rng(77);
  std::vector<double> zs;
  for (int trial = 0; trial < 1000; ++trial) {
    TokenSeq seq;
    for (int t = 0; t < 101; ++t)
      seq.push_back(static_cast<TokenId>(rng.next_below(V)));
    zs.push_back(kgw_detect(seq, key, 0.5, 4.0, V).statistic);
  }
  double mean = 0.0;
  for (double z : zs) mean += z;
  mean /= static_cast<double>(zs.size());
  double var = 0.0;
  for (double z : zs) var += (z - mean) * (z - mean);
  var /= static_cast<double>(zs.size() - 1);
  CHECK(std::abs(mean) < 0.1);
  CHECK(var > 0.8);
  CHECK(var < 1.2);
}

TEST_CASE("generation and detection agree position by position") {
  const auto model = NgramModel::train(
      {"the dose may help the patient and the doctor",
       "a dose can hurt some patient", "the doctor can help"},
      2, 0.05);
  const WatermarkKey key{99};
  KgwParams params;
  params.delta = 10.0;  // near-deterministic green sampling
  const TokenSeq prompt = tokenize("the", model.vocab());
  const GenRecord rec =
      generate(model, prompt, 60, kgw_hook(key, params), 5);

  // Replay: position 0 hashes the last prompt token, later positions their
  // predecessor; membership must match the detector's recomputation.
  int greens = 0;
  for (int t = 0; t < rec.output_ids.size(); ++t) {
    const TokenId prev = t == 0 ? prompt[prompt.size() - 1]
                                : rec.output_ids[t - 1];
    const uint64_t seed = hash_context(key, std::span<const TokenId>(&prev, 1));
    const Partition part =
        seeded_partition(seed, model.vocab().size(), params.gamma);
    greens += part.is_green(rec.output_ids[t]);
  }
  CHECK(greens >= static_cast<int>(0.95 * rec.output_ids.size()));

  // Detector counts the same memberships over positions 1..len-1.
  TokenSeq full = prompt;
  for (int i = 0; i < rec.output_ids.size(); ++i)
    full.push_back(rec.output_ids[i]);
  const DetectionScore det =
      kgw_detect(full, key, params.gamma, 4.0, model.vocab().size());
  CHECK(det.is_watermarked);
}

TEST_CASE("sweet_detect: gated arithmetic and undetectable error") {
  const WatermarkKey key{4711};
  const int V = 64;
  SweetParams params;
  params.entropy_threshold = 0.9;

  // Entropies passing the gate everywhere reduce SWEET to KGW.
  const TokenSeq hot = crafted_stream(key, 0.5, V, 100, 75);
  std::vector<double> high(static_cast<size_t>(hot.size()), 2.0);
  const DetectionScore sweet =
      sweet_detect(hot, high, key, params, 4.0, V);
  CHECK(sweet.statistic == doctest::Approx(5.0).epsilon(1e-12));

  SweetParams tau0;
  tau0.entropy_threshold = 0.0;
  std::vector<double> positive(static_cast<size_t>(hot.size()), 0.5);
  CHECK(sweet_detect(hot, positive, key, tau0, 4.0, V).statistic ==
        doctest::Approx(kgw_detect(hot, key, 0.5, 4.0, V).statistic));

  // All entropies below the gate: undetectable, not "not watermarked".
  std::vector<double> low(static_cast<size_t>(hot.size()), 0.1);
  CHECK_THROWS_AS(sweet_detect(hot, low, key, params, 4.0, V),
                  UndetectableError);
}

TEST_CASE("sweet_detect: only gated positions are scored") {
  const WatermarkKey key{808};
  const int V = 64;
  // 40 green then 60 red scored positions.
  const TokenSeq seq = crafted_stream(key, 0.5, V, 100, 40);
  // Gate keeps exactly the first 50 scored positions (indices 1..50).
  std::vector<double> entropies(static_cast<size_t>(seq.size()), 0.0);
  for (int t = 1; t <= 50; ++t) entropies[static_cast<size_t>(t)] = 2.0;
  SweetParams params;
  params.entropy_threshold = 0.9;
  const DetectionScore score =
      sweet_detect(seq, entropies, key, params, 4.0, V);
  // 40 green of 50 scored: z = (40 - 25) / sqrt(12.5).
  CHECK(score.statistic ==
        doctest::Approx((40.0 - 25.0) / std::sqrt(12.5)).epsilon(1e-12));
}
