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
#include <limits>

#include "oracles.hpp"
#include "wmeval/expedit.hpp"

using namespace wmeval;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd random_xi(SplitMix64& rng, int rows, int cols) {
  Eigen::MatrixXd xi(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      xi(r, c) = to_open_unit(rng.next());
  return xi;
}

}  // namespace

TEST_CASE("exp_sample: monotone in mu at equal xi") {
  Eigen::VectorXd mu(2);
  mu << 0.9, 0.1;
  const std::vector<double> xi = {0.5, 0.5};
  CHECK(exp_sample(ProbDist(mu), xi) == 0);  // scores 0.770 vs 6.93
}

TEST_CASE("exp_sample: monotone in xi at equal mu") {
  Eigen::VectorXd mu(2);
  mu << 0.5, 0.5;
  const std::vector<double> xi = {0.99, 0.5};
  CHECK(exp_sample(ProbDist(mu), xi) == 0);  // scores 0.0201 vs 1.386
}

TEST_CASE("exp_sample: zero-probability tokens never win") {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(4);
  mu[1] = 1.0;
  const std::vector<double> xi = {0.999999, 0.001, 0.999999, 0.999999};
  CHECK(exp_sample(ProbDist(mu), xi) == 1);
}

TEST_CASE("exp_sample: fresh uniform xi reproduces the distribution") {
  // Gumbel-trick frequency oracle: 50k draws, chi-square GOF at p > 0.01.
  Eigen::VectorXd mu(4);
  mu << 0.4, 0.3, 0.2, 0.1;
  const ProbDist dist(mu);
  SplitMix64 rng(99);
  const int draws = 50000;
  std::vector<int> counts(4, 0);
  std::vector<double> xi(4);
  for (int i = 0; i < draws; ++i) {
    for (auto& x : xi) x = to_open_unit(rng.next());
    ++counts[static_cast<size_t>(exp_sample(dist, xi))];
  }
  double chi2 = 0.0;
  for (int t = 0; t < 4; ++t) {
    const double expected = mu[t] * draws;
    const double diff = counts[static_cast<size_t>(t)] - expected;
    chi2 += diff * diff / expected;
  }
  CHECK(chi2 < 11.344866730144373);  // chi2 ppf(0.99, df=3)
}

TEST_CASE("exp_generate: point mass ignores xi; fixed inputs are deterministic") {
  Vocab vocab;
  vocab.add("w0");
  NgramModel model(vocab, 1, 0.0);
  model.add_count({}, 2, 5);
  model.finalize();
  const ExpKey key{WatermarkKey{8}, 16, model.vocab().size()};
  const GenRecord rec = exp_generate(model, TokenSeq{}, 10, key, 3);
  for (int i = 0; i < rec.output_ids.size(); ++i)
    CHECK(rec.output_ids[i] == 2);
  CHECK(rec.key_offset.has_value());
  CHECK(*rec.key_offset >= 0);
  CHECK(*rec.key_offset < 16);

  const GenRecord again = exp_generate(model, TokenSeq{}, 10, key, 3);
  CHECK(rec.output_ids == again.output_ids);
  CHECK(rec.key_offset == again.key_offset);
}

TEST_CASE("exp_generate: different offsets usually change the sequence") {
  const auto model = NgramModel::train(
      {"the dose may help the patient and some doctor",
       "a treatment can cause pain or swelling in most cases",
       "any doctor should monitor the blood pressure over time"},
      2, 0.1);
  const ExpKey key{WatermarkKey{21}, 64, model.vocab().size()};
  const TokenSeq prompt = tokenize("the", model.vocab());
  int differing = 0;
  for (uint64_t s = 0; s < 100; ++s) {
    const GenRecord a = exp_generate(model, prompt, 24, key, 2 * s);
    const GenRecord b = exp_generate(model, prompt, 24, key, 2 * s + 1);
    if (a.output_ids.ids != b.output_ids.ids) ++differing;
  }
  CHECK(differing >= 90);
}

TEST_CASE("align_cost: single-token match-only base term") {
  Eigen::MatrixXd xi(1, 3);
  xi << 0.1, 0.5, 0.9;
  const std::vector<TokenId> y = {1};
  CHECK(align_cost(y, xi, kInf) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("align_cost: empty vs empty is zero") {
  Eigen::MatrixXd xi(0, 3);
  CHECK(align_cost(std::vector<TokenId>{}, xi, 1.5) == 0.0);
  CHECK(align_cost(std::vector<TokenId>{}, xi, kInf) == 0.0);
}

TEST_CASE("align_cost: base cases with unequal lengths") {
  Eigen::MatrixXd xi(3, 2);
  xi << 0.5, 0.5, 0.5, 0.5, 0.5, 0.5;
  CHECK(align_cost(std::vector<TokenId>{}, xi, 0.25) ==
        doctest::Approx(0.75));
}

TEST_CASE("align_cost: DP equals memo-free brute-force recursion exactly") {
  SplitMix64 rng(31);
  for (int len_y = 0; len_y <= 8; ++len_y) {
    for (int len_xi = 0; len_xi <= 8; ++len_xi) {
      for (int rep = 0; rep < 3; ++rep) {
        const Eigen::MatrixXd xi = random_xi(rng, len_xi, 4);
        std::vector<TokenId> y(static_cast<size_t>(len_y));
        for (auto& t : y) t = static_cast<TokenId>(rng.next_below(4));
        for (const double gamma : {0.0, 0.7, kInf}) {
          const double dp = align_cost(y, xi, gamma);
          const double brute = oracles::brute_align_cost(y, xi, gamma);
          CHECK(dp == brute);  // exact: identical expression trees
        }
      }
    }
  }
}

TEST_CASE("align_cost: infinite gamma on equal lengths sums match costs") {
  SplitMix64 rng(41);
  const Eigen::MatrixXd xi = random_xi(rng, 6, 5);
  std::vector<TokenId> y(6);
  for (auto& t : y) t = static_cast<TokenId>(rng.next_below(5));
  double expected = 0.0;
  for (int t = 5; t >= 0; --t)
    expected += std::log(1.0 - xi(t, y[static_cast<size_t>(t)]));
  CHECK(align_cost(y, xi, kInf) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("exp_statistic equals the minimum over materialized offsets") {
  SplitMix64 rng(5);
  const int V = 12;
  const ExpKey key{WatermarkKey{77}, 10, V};
  TokenSeq y;
  for (int i = 0; i < 6; ++i)
    y.push_back(static_cast<TokenId>(rng.next_below(V)));
  AlignParams params;
  params.block_len = 6;
  const double fast = exp_statistic(y.ids, key, params);

  double slow = kInf;
  for (int offset = 0; offset < key.pseudo_length; ++offset) {
    Eigen::MatrixXd block(6, V);
    for (int r = 0; r < 6; ++r)
      for (TokenId c = 0; c < V; ++c)
        block(r, c) = key.xi((offset + r) % key.pseudo_length, c);
    slow = std::min(slow, align_cost(y.ids, block, params.gamma_edit));
  }
  CHECK(fast == slow);
}

TEST_CASE("exp_detect: T=1 with a fixed resample seed has support {1/2, 1}") {
  const auto model = NgramModel::train(
      {"the dose may help the patient", "a doctor can help"}, 2, 0.1);
  const ExpKey key{WatermarkKey{3}, 32, model.vocab().size()};
  AlignParams params;
  params.num_permutations = 1;
  params.resample_seed = 400;
  SplitMix64 rng(2);
  for (int trial = 0; trial < 6; ++trial) {
    TokenSeq y;
    for (int i = 0; i < 20; ++i)
      y.push_back(static_cast<TokenId>(
          rng.next_below(static_cast<uint64_t>(model.vocab().size()))));
    const double p = exp_detect(y, key, params).statistic;
    CHECK((p == doctest::Approx(0.5) || p == doctest::Approx(1.0)));
  }
}

TEST_CASE("exp_detect: watermarked text is detected, smoke scale") {
  const auto model = NgramModel::train(
      {"the dose may help the patient and some doctor over time",
       "a treatment can cause pain or swelling in most cases",
       "any doctor should monitor the blood pressure as needed",
       "most patient can follow each therapy and restore sleep"},
      3, 0.1);
  const ExpKey key{WatermarkKey{1234}, 48, model.vocab().size()};
  const TokenSeq prompt = tokenize("the", model.vocab());
  AlignParams params;
  params.num_permutations = 40;

  int detected = 0;
  for (uint64_t trial = 0; trial < 10; ++trial) {
    const GenRecord rec = exp_generate(model, prompt, 70, key, trial);
    AlignParams p = params;
    p.resample_seed = trial + 1000;
    const double pv = exp_detect(rec.output_ids, key, p, /*jobs=*/2).statistic;
    if (pv <= 0.05) ++detected;
  }
  CHECK(detected >= 8);

  // Unwatermarked p-values stay in (0, 1] and are not tiny on average.
  SplitMix64 rng(6);
  double psum = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    TokenSeq y;
    for (int i = 0; i < 70; ++i)
      y.push_back(static_cast<TokenId>(
          rng.next_below(static_cast<uint64_t>(model.vocab().size()))));
    AlignParams p = params;
    p.resample_seed = static_cast<uint64_t>(trial) + 5000;
    const double pv = exp_detect(y, key, p, /*jobs=*/2).statistic;
    CHECK(pv > 0.0);
    CHECK(pv <= 1.0);
    psum += pv;
  }
  CHECK(psum / 6.0 > 0.15);
}

TEST_CASE("exp_detect: block longer than the text is rejected") {
  const ExpKey key{WatermarkKey{1}, 16, 8};
  AlignParams params;
  params.block_len = 10;
  TokenSeq y;
  for (int i = 0; i < 5; ++i) y.push_back(i % 8);
  CHECK_THROWS_AS(exp_detect(y, key, params), std::invalid_argument);
}
