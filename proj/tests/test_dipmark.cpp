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
#include <numeric>

#include "oracles.hpp"
#include "wmeval/dipmark.hpp"

using namespace wmeval;

namespace {

Permutation identity_perm(int n) {
  std::vector<TokenId> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  return Permutation(std::move(order));
}

Eigen::VectorXd random_dist(SplitMix64& rng, int n) {
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p[i] = rng.next_unit() + 1e-3;
  return p / p.sum();
}

}  // namespace

TEST_CASE("dip_reweight: alpha 0 is the identity") {
  SplitMix64 rng(3);
  const Eigen::VectorXd p = random_dist(rng, 5);
  const ProbDist out =
      dip_reweight(ProbDist(p), seeded_permutation(17, 5), 0.0);
  CHECK((out.probs() - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dip_reweight: uniform 4, identity permutation, alpha 0.5") {
  // Hand cumulative computation: both boundary terms coincide at 0.5.
  const ProbDist out = dip_reweight(ProbDist(Eigen::VectorXd::Constant(4, 0.25)),
                                    identity_perm(4), 0.5);
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(0.0));
  CHECK(out[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dip_reweight: output is a distribution for random inputs") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(7));
    const Eigen::VectorXd p = random_dist(rng, n);
    const double alpha = 0.5 * rng.next_unit();
    const ProbDist out = dip_reweight(
        ProbDist(p), seeded_permutation(rng.next(), n), alpha);
    CHECK(out.probs().minCoeff() >= 0.0);
    CHECK(out.probs().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dip_reweight: permutation average reproduces the input") {
  // The paper's central distribution-preservation claim, brute-forced over
  // every permutation of small vocabularies.
  SplitMix64 rng(23);
  for (int n = 3; n <= 5; ++n) {
    const Eigen::VectorXd p = random_dist(rng, n);
    const Eigen::VectorXd avg = oracles::permutation_average(
        n, [&](const std::vector<TokenId>& order) {
          return dip_reweight(ProbDist(p), Permutation(order), 0.45).probs();
        });
    CHECK((avg - p).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("dip_reweight: symmetric alpha halves the permuted prefix") {
  // At alpha = 0.5 the first half of the permuted cumulative mass is
  // zeroed and the second half doubles.
  Eigen::VectorXd p(4);
  p << 0.5, 0.25, 0.125, 0.125;
  const ProbDist out = dip_reweight(ProbDist(p), identity_perm(4), 0.5);
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(0.5).epsilon(1e-12));   // 2 * 0.25
  CHECK(out[2] == doctest::Approx(0.25).epsilon(1e-12));  // 2 * 0.125
  CHECK(out[3] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("dip_generate_step: alpha 0 matches unwatermarked sampling") {
  // Chi-square goodness of fit over 10k draws; crit = ppf(0.99, df=3).
  Eigen::VectorXd p(4);
  p << 0.4, 0.3, 0.2, 0.1;
  const ProbDist dist(p);
  SplitMix64 rng(2025);
  std::vector<int> counts(4, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const TokenId prev = static_cast<TokenId>(i % 4);
    ++counts[static_cast<size_t>(
        dip_generate_step(dist, WatermarkKey{5}, prev, 0.0, rng))];
  }
  double chi2 = 0.0;
  for (int t = 0; t < 4; ++t) {
    const double expected = p[t] * draws;
    const double diff = counts[static_cast<size_t>(t)] - expected;
    chi2 += diff * diff / expected;
  }
  CHECK(chi2 < 11.344866730144373);  // chi2 ppf(0.99, 3)
}

TEST_CASE("dip_generate_step: deterministic chain and point mass") {
  Eigen::VectorXd p(4);
  p << 0.4, 0.3, 0.2, 0.1;
  SplitMix64 rng_a(7), rng_b(7);
  for (int i = 0; i < 32; ++i) {
    const TokenId prev = static_cast<TokenId>(i % 4);
    CHECK(dip_generate_step(ProbDist(p), WatermarkKey{9}, prev, 0.45, rng_a) ==
          dip_generate_step(ProbDist(p), WatermarkKey{9}, prev, 0.45, rng_b));
  }

  Eigen::VectorXd point = Eigen::VectorXd::Zero(5);
  point[3] = 1.0;
  SplitMix64 rng(1);
  for (int i = 0; i < 16; ++i)
    CHECK(dip_generate_step(ProbDist(point), WatermarkKey{11},
                            static_cast<TokenId>(i), 0.45, rng) == 3);
}

namespace {

// Crafted stream with an exact green count under the detection rule.
TokenSeq crafted_dip_stream(WatermarkKey key, double gamma, int vocab_size,
                            int n_scored, int n_green) {
  const int boundary = static_cast<int>(std::llround(gamma * vocab_size));
  TokenSeq seq;
  seq.push_back(0);
  for (int t = 0; t < n_scored; ++t) {
    const TokenId prev = seq[seq.size() - 1];
    const uint64_t seed =
        hash_context(key, std::span<const TokenId>(&prev, 1));
    const Permutation perm = seeded_permutation(seed, vocab_size);
    const bool want_green = t < n_green;
    // Green tokens live in the tail slots of the permutation.
    const int slot = want_green ? vocab_size - 1 : 0;
    REQUIRE(((slot >= boundary) == want_green));
    seq.push_back(perm.order()[static_cast<size_t>(slot)]);
  }
  return seq;
}

}  // namespace

TEST_CASE("dip_detect: crafted ratios give exact phi") {
  const WatermarkKey key{606};
  const int V = 32;

  const TokenSeq even = crafted_dip_stream(key, 0.5, V, 100, 50);
  CHECK(dip_detect(even, key, 0.5, 4.0, V).phi ==
        doctest::Approx(0.0).epsilon(1e-12));

  const TokenSeq hot = crafted_dip_stream(key, 0.5, V, 100, 80);
  const DipDetection det = dip_detect(hot, key, 0.5, 4.0, V);
  CHECK(det.phi == doctest::Approx(0.30).epsilon(1e-12));
  // z = phi * sqrt(n) / sqrt(gamma (1-gamma)) = 0.3 * 10 / 0.5 = 6.
  CHECK(det.score.statistic == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(det.score.is_watermarked);

  TokenSeq short_seq;
  short_seq.push_back(0);
  CHECK_THROWS_AS(dip_detect(short_seq, key, 0.5, 4.0, V),
                  std::invalid_argument);
}

TEST_CASE("dip_detect: null phi is centered for uniform random streams") {
  const WatermarkKey key{1001};
  const int V = 32;
  SplitMix64 rng(13);
  double phi_sum = 0.0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    TokenSeq seq;
    for (int t = 0; t < 51; ++t)
      seq.push_back(static_cast<TokenId>(rng.next_below(V)));
    phi_sum += dip_detect(seq, key, 0.5, 4.0, V).phi;
  }
  CHECK(std::abs(phi_sum / trials) < 0.02);
}

TEST_CASE("dipmark generation and detection share green membership") {
  const auto model = NgramModel::train(
      {"the dose may help the patient", "a doctor can monitor blood pressure",
       "some treatment can cause pain"},
      2, 0.05);
  const WatermarkKey key{31};
  DipParams params;  // alpha 0.45
  const TokenSeq prompt = tokenize("the", model.vocab());
  const GenRecord rec =
      generate(model, prompt, 80, dipmark_hook(key, params), 9);

  const int V = model.vocab().size();
  const int boundary = static_cast<int>(std::llround(0.5 * V));
  int greens = 0;
  for (int t = 0; t < rec.output_ids.size(); ++t) {
    const TokenId prev =
        t == 0 ? prompt[prompt.size() - 1] : rec.output_ids[t - 1];
    const uint64_t seed = hash_context(key, std::span<const TokenId>(&prev, 1));
    const Permutation perm = seeded_permutation(seed, V);
    greens += perm.slot_of(rec.output_ids[t]) >= boundary;
  }
  // DiP-reweight shifts mass toward tail slots; the crafted replay must
  // count well above the null rate of one half.
  CHECK(greens > static_cast<int>(0.6 * rec.output_ids.size()));
}
