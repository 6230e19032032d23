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

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "wmeval/detection.hpp"
#include "wmeval/generate.hpp"
#include "wmeval/wmcore.hpp"

using namespace wmeval;

TEST_CASE("splitmix64 matches the published seed-0 stream") {
  SplitMix64 rng(0);
  CHECK(rng.next() == UINT64_C(0xE220A8397B1DCDAF));
  CHECK(rng.next() == UINT64_C(0x6E789E6AA1B965F4));
  CHECK(rng.next() == UINT64_C(0x06C45D188009454F));
}

TEST_CASE("hash_context: determinism") {
  const WatermarkKey key{1234567};
  const TokenId ctx[2] = {10, 20};
  CHECK(hash_context(key, std::span<const TokenId>(ctx, 2)) ==
        hash_context(key, std::span<const TokenId>(ctx, 2)));
}

TEST_CASE("hash_context: matches the independent reference chain") {
  // Frozen value computed with a separate implementation.
  const TokenId bos[1] = {Vocab::kBosId};
  CHECK(hash_context(WatermarkKey{0}, std::span<const TokenId>(bos, 1)) ==
        UINT64_C(0x08B4FDA8C892B50E));
  const std::vector<TokenId> ctx42 = {7, 9};
  CHECK(hash_context(WatermarkKey{42}, ctx42) ==
        UINT64_C(0xEC56D7D409CF7398));

  SplitMix64 seeds(99);
  for (int trial = 0; trial < 50; ++trial) {
    const uint64_t key = seeds.next();
    std::vector<TokenId> ids;
    for (int i = 0; i < static_cast<int>(seeds.next_below(4)); ++i)
      ids.push_back(static_cast<TokenId>(seeds.next_below(1000)));
    CHECK(hash_context(WatermarkKey{key}, ids) ==
          oracles::ref_hash_chain(key, ids));
  }
}

TEST_CASE("hash_context: empty context equals BOS context") {
  const TokenId bos[1] = {Vocab::kBosId};
  CHECK(hash_context(WatermarkKey{77}, {}) ==
        hash_context(WatermarkKey{77}, std::span<const TokenId>(bos, 1)));
}

TEST_CASE("hash_context: contexts differing in one id collide essentially never") {
  SplitMix64 seeds(5);
  int collisions = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const WatermarkKey key{seeds.next()};
    const TokenId a = static_cast<TokenId>(seeds.next_below(5000));
    TokenId b = static_cast<TokenId>(seeds.next_below(5000));
    if (b == a) b = (b + 1) % 5000;
    const TokenId ca[1] = {a}, cb[1] = {b};
    if (hash_context(key, std::span<const TokenId>(ca, 1)) ==
        hash_context(key, std::span<const TokenId>(cb, 1)))
      ++collisions;
  }
  CHECK(collisions == 0);
}

TEST_CASE("seeded_partition: sizes and determinism") {
  const Partition p = seeded_partition(123, 10, 0.5);
  CHECK(p.green_size() == 5);
  CHECK(static_cast<int>(p.green_ids().size()) == 5);
  const Partition q = seeded_partition(123, 10, 0.5);
  CHECK(p.green_ids() == q.green_ids());
  CHECK_THROWS_AS(seeded_partition(1, 10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(seeded_partition(1, 10, 1.0), std::invalid_argument);
}

TEST_CASE("seeded_partition: per-token green frequency near gamma") {
  // Monte-Carlo frequency oracle over 1000 seeds.
  const int V = 10;
  std::vector<int> green_hits(V, 0);
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    const Partition p = seeded_partition(seed, V, 0.5);
    for (TokenId t = 0; t < V; ++t)
      if (p.is_green(t)) ++green_hits[static_cast<size_t>(t)];
  }
  for (int t = 0; t < V; ++t) {
    const double freq = green_hits[static_cast<size_t>(t)] / 1000.0;
    CHECK(freq > 0.45);
    CHECK(freq < 0.55);
  }
}

TEST_CASE("seeded_permutation: bijection for many seeds, identity for V=1") {
  CHECK(seeded_permutation(9, 1).order() == std::vector<TokenId>{0});
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const Permutation perm = seeded_permutation(seed, 17);
    std::set<TokenId> seen(perm.order().begin(), perm.order().end());
    CHECK(static_cast<int>(seen.size()) == 17);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 16);
  }
  CHECK(seeded_permutation(4, 33).order() == seeded_permutation(4, 33).order());
}

TEST_CASE("generate: point-mass model repeats its token deterministically") {
  Vocab vocab;
  vocab.add("w0");
  NgramModel model(vocab, 1, 0.0);
  model.add_count({}, 2, 3);
  model.finalize();
  const GenRecord rec = generate(model, TokenSeq{}, 8, GenHook{}, 123);
  REQUIRE(rec.output_ids.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(rec.output_ids[i] == 2);
  CHECK(rec.entropies.size() == 8);
  CHECK(rec.entropies[0] == doctest::Approx(0.0));
}

TEST_CASE("generate: fixed seed reproduces outputs bit for bit") {
  const auto model = NgramModel::train(
      {"the dose may help", "a dose can hurt the patient"}, 2, 0.05);
  const TokenSeq prompt = tokenize("the", model.vocab());
  const GenRecord a = generate(model, prompt, 32, GenHook{}, 777);
  const GenRecord b = generate(model, prompt, 32, GenHook{}, 777);
  CHECK(a.output_ids == b.output_ids);
  CHECK(a.entropies == b.entropies);
  const GenRecord c = generate(model, prompt, 32, GenHook{}, 778);
  CHECK(a.output_ids.ids != c.output_ids.ids);
}

TEST_CASE("generate: identity hook matches model marginals (unigram case)") {
  // 50k steps from a fixed unigram model; empirical frequencies must sit
  // within 3 sigma multinomial bounds.
  Vocab vocab;
  vocab.add("w0");
  vocab.add("w1");
  NgramModel model(vocab, 1, 0.0);
  model.add_count({}, 0, 1);
  model.add_count({}, 1, 2);
  model.add_count({}, 2, 3);
  model.add_count({}, 3, 4);
  model.finalize();
  const ProbDist marginal = model.next_dist(TokenSeq{});

  const int steps = 50000;
  std::vector<int> counts(4, 0);
  SplitMix64 rng(4242);
  for (int i = 0; i < steps; ++i)
    ++counts[static_cast<size_t>(multinomial_sample(marginal, rng))];
  for (TokenId t = 0; t < 4; ++t) {
    const double p = marginal[t];
    const double sigma = std::sqrt(p * (1 - p) * steps);
    CHECK(std::abs(counts[static_cast<size_t>(t)] - p * steps) < 3.0 * sigma);
  }
}

TEST_CASE("detection score verdict directions") {
  CHECK(make_detection_score(ScoreKind::z, 4.5, 4.0).is_watermarked);
  CHECK_FALSE(make_detection_score(ScoreKind::z, 3.9, 4.0).is_watermarked);
  CHECK(make_detection_score(ScoreKind::ratio, 4.1, 4.0).is_watermarked);
  CHECK(make_detection_score(ScoreKind::curvature, 2.1, 2.0).is_watermarked);
  CHECK(make_detection_score(ScoreKind::logrank, 0.5, 1.0).is_watermarked);
  CHECK_FALSE(make_detection_score(ScoreKind::logrank, 1.5, 1.0).is_watermarked);
  CHECK(make_detection_score(ScoreKind::align_pvalue, 0.01, 0.01)
            .is_watermarked);
  CHECK_FALSE(
      make_detection_score(ScoreKind::align_pvalue, 0.02, 0.01).is_watermarked);
}
