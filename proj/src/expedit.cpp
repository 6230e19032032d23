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

#include "wmeval/expedit.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <vector>

namespace wmeval {

namespace {

// Backward DP mirroring the recurrence term by term so that values match a
// literal recursive evaluation bit for bit. D[i][j] = d(y[i:], xi[j:]).
// match_cost(i, j) = ln(1 - xi_j[y_i]).
template <typename MatchCost>
double dp_align(int len_y, int len_xi, double gamma, MatchCost match_cost) {
  auto base = [gamma](int remaining) {
    return remaining == 0 ? 0.0 : gamma * remaining;
  };
  std::vector<double> next(static_cast<size_t>(len_xi) + 1);
  std::vector<double> cur(static_cast<size_t>(len_xi) + 1);
  for (int j = 0; j <= len_xi; ++j)
    next[static_cast<size_t>(j)] = base(len_xi - j);  // D[len_y][j]
  for (int i = len_y - 1; i >= 0; --i) {
    cur[static_cast<size_t>(len_xi)] = base(len_y - i);  // D[i][len_xi]
    for (int j = len_xi - 1; j >= 0; --j) {
      const double match =
          next[static_cast<size_t>(j) + 1] + match_cost(i, j);
      const double del = cur[static_cast<size_t>(j) + 1] + gamma;
      const double ins = next[static_cast<size_t>(j)] + gamma;
      cur[static_cast<size_t>(j)] = std::min(match, std::min(del, ins));
    }
    std::swap(cur, next);
  }
  return next[0];
}

}  // namespace

Eigen::VectorXd ExpKey::row(int r) const {
  Eigen::VectorXd out(vocab_size);
  for (TokenId c = 0; c < vocab_size; ++c) out[c] = xi(r, c);
  return out;
}

TokenId exp_sample(const ProbDist& dist, std::span<const double> xi_row) {
  if (static_cast<int>(xi_row.size()) != dist.size())
    throw std::invalid_argument("xi row/distribution size mismatch");
  TokenId best = -1;
  double best_score = std::numeric_limits<double>::infinity();
  for (TokenId i = 0; i < dist.size(); ++i) {
    const double mu = dist[i];
    if (mu <= 0.0) continue;
    const double score = -std::log(xi_row[static_cast<size_t>(i)]) / mu;
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  if (best < 0) throw std::invalid_argument("distribution has no mass");
  return best;
}

GenRecord exp_generate(const NgramModel& model, const TokenSeq& prompt,
                       int max_tokens, const ExpKey& expkey,
                       uint64_t offset_seed) {
  if (expkey.vocab_size != model.vocab().size())
    throw std::invalid_argument("key vocab size does not match model");
  SplitMix64 offset_rng(offset_seed);
  const int offset = static_cast<int>(
      offset_rng.next_below(static_cast<uint64_t>(expkey.pseudo_length)));

  GenHook hook;
  hook.sampler = [&expkey, offset](const ProbDist& dist, TokenId /*prev*/,
                                   int step) {
    const int r = (offset + step) % expkey.pseudo_length;
    const Eigen::VectorXd xi = expkey.row(r);
    return exp_sample(dist, std::span<const double>(xi.data(),
                                                    static_cast<size_t>(
                                                        xi.size())));
  };
  GenRecord rec = generate(model, prompt, max_tokens, hook, /*rng_seed=*/0);
  rec.method = WatermarkMethod::expedit;
  rec.key_offset = offset;
  rec.params["pseudo_length"] = expkey.pseudo_length;
  return rec;
}

double align_cost(std::span<const TokenId> y, const Eigen::MatrixXd& xi_block,
                  double gamma_edit) {
  const int len_y = static_cast<int>(y.size());
  const int len_xi = static_cast<int>(xi_block.rows());
  return dp_align(len_y, len_xi, gamma_edit, [&](int i, int j) {
    return std::log(1.0 - xi_block(j, y[static_cast<size_t>(i)]));
  });
}

namespace {

double min_offset_cost(std::span<const TokenId> block, const ExpKey& key,
                       double gamma_edit) {
  const int n = key.pseudo_length;
  const int len = static_cast<int>(block.size());
  // Match costs only involve the tokens present in the block.
  Eigen::MatrixXd costs(n, len);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < len; ++j)
      costs(r, j) = std::log(1.0 - key.xi(r, block[static_cast<size_t>(j)]));

  double best = std::numeric_limits<double>::infinity();
  for (int offset = 0; offset < n; ++offset) {
    const double c = dp_align(len, len, gamma_edit, [&](int i, int j) {
      return costs((offset + j) % n, i);
    });
    if (c < best) best = c;
  }
  return best;
}

}  // namespace

double exp_statistic(std::span<const TokenId> y, const ExpKey& expkey,
                     const AlignParams& params) {
  const int block_len =
      params.block_len > 0
          ? params.block_len
          : std::min<int>(static_cast<int>(y.size()), expkey.pseudo_length);
  if (static_cast<int>(y.size()) < block_len)
    throw std::invalid_argument("text shorter than the alignment block");
  return min_offset_cost(y.first(static_cast<size_t>(block_len)), expkey,
                         params.gamma_edit);
}

DetectionScore exp_detect(const TokenSeq& y, const ExpKey& expkey,
                          const AlignParams& params, int jobs) {
  if (params.num_permutations < 1)
    throw std::invalid_argument("num_permutations must be >= 1");
  const double observed =
      exp_statistic(std::span<const TokenId>(y.ids), expkey, params);

  // Null keys come from a dedicated stream so reruns are reproducible.
  SplitMix64 stream(params.resample_seed);
  std::vector<uint64_t> secrets(static_cast<size_t>(params.num_permutations));
  for (auto& s : secrets) s = stream.next();

  auto count_leq = [&](size_t begin, size_t end) {
    int count = 0;
    for (size_t t = begin; t < end; ++t) {
      ExpKey null_key{WatermarkKey{secrets[t]}, expkey.pseudo_length,
                      expkey.vocab_size};
      if (exp_statistic(std::span<const TokenId>(y.ids), null_key, params) <=
          observed)
        ++count;
    }
    return count;
  };

  int at_or_below = 0;
  if (jobs <= 1) {
    at_or_below = count_leq(0, secrets.size());
  } else {
    const size_t chunks = std::min<size_t>(static_cast<size_t>(jobs),
                                           secrets.size());
    std::vector<std::future<int>> futures;
    const size_t per = (secrets.size() + chunks - 1) / chunks;
    for (size_t c = 0; c < chunks; ++c) {
      const size_t lo = c * per;
      const size_t hi = std::min(secrets.size(), lo + per);
      if (lo >= hi) break;
      futures.push_back(
          std::async(std::launch::async, count_leq, lo, hi));
    }
    for (auto& f : futures) at_or_below += f.get();
  }

  const double p = (1.0 + at_or_below) /
                   (static_cast<double>(params.num_permutations) + 1.0);
  return make_detection_score(ScoreKind::align_pvalue, p, params.p_threshold);
}

}  // namespace wmeval
