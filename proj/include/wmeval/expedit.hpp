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

#include <Eigen/Core>
#include <span>

#include "wmeval/detection.hpp"
#include "wmeval/generate.hpp"
#include "wmeval/wmcore.hpp"

namespace wmeval {

// Cyclic pseudorandom watermark key sequence: an n x V matrix of reals in
// the open interval (0, 1), fully determined by (key, n, V). Entries are
// hashed on demand; nothing is stored.
struct ExpKey {
  WatermarkKey key;
  int pseudo_length = 256;
  int vocab_size = 0;

  double xi(int row, TokenId col) const {
    const TokenId ctx[2] = {static_cast<TokenId>(row), col};
    return to_open_unit(hash_context(key, std::span<const TokenId>(ctx, 2)));
  }

  // Materializes one row of the matrix.
  Eigen::VectorXd row(int r) const;
};

struct AlignParams {
  double gamma_edit = 0.0;        // insert/delete penalty; 0 is the optimum
  int block_len = 0;              // 0 = min(len(y), pseudo_length)
  int num_permutations = 100;     // T resampled keys for the p-value
  double p_threshold = 0.01;
  uint64_t resample_seed = 0;     // stream seed for the T null keys
};

// Exponential minimum sampling: argmin over supported tokens of
// -ln(xi_i) / mu(i), ties broken by ascending id. Marginally samples from
// the distribution when xi is fresh uniform randomness.
TokenId exp_sample(const ProbDist& dist, std::span<const double> xi_row);

// Generation against the cyclic key rows, starting at a uniform random
// offset drawn from offset_seed and recorded in GenRecord::key_offset.
GenRecord exp_generate(const NgramModel& model, const TokenSeq& prompt,
                       int max_tokens, const ExpKey& expkey,
                       uint64_t offset_seed);

// Levenshtein alignment cost between a token block and key rows:
//   d(y, xi) = min{ d(y2:, xi2:) + ln(1 - xi_1[y_1]),
//                   d(y, xi2:) + gamma, d(y2:, xi) + gamma }
// with d(empty, xi) = gamma*len(xi) and d(y, empty) = gamma*len(y).
// xi_block is (rows x V); row j supplies the match cost for xi_j.
double align_cost(std::span<const TokenId> y, const Eigen::MatrixXd& xi_block,
                  double gamma_edit);

// Observed test statistic: minimum align_cost between the first block of y
// and every cyclic offset into the key rows.
double exp_statistic(std::span<const TokenId> y, const ExpKey& expkey,
                     const AlignParams& params);

// Permutation test: p = (1 + #{resampled keys with statistic <= observed})
//                       / (T + 1).
// `jobs` > 1 runs the independent resamples on that many threads.
DetectionScore exp_detect(const TokenSeq& y, const ExpKey& expkey,
                          const AlignParams& params, int jobs = 1);

}  // namespace wmeval
