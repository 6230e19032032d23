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

// Independent reference implementations used only as test oracles. These
// deliberately do not share code with the library.

#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <vector>

namespace oracles {

// Reference splitmix64 written from the published algorithm description.
uint64_t ref_splitmix64(uint64_t& state);

// Reference implementation of the library's context-hash chain.
uint64_t ref_hash_chain(uint64_t key, const std::vector<int32_t>& ids);

// Memo-free recursion of the alignment cost, literal to the recurrence:
// d(y, xi) = min{ d(y2:, xi2:) + ln(1 - xi_1[y_1]), d(y, xi2:) + g,
//                 d(y2:, xi) + g } with d(empty, xi) = g*len(xi).
double brute_align_cost(const std::vector<int32_t>& y,
                        const Eigen::MatrixXd& xi_block, double gamma_edit);

// AUROC by explicit pair counting (ties at 0.5); higher scores positive.
double brute_auroc(const std::vector<double>& positives,
                   const std::vector<double>& negatives);

// Two-pass Pearson correlation with scalar loops.
double two_pass_pearson(const std::vector<double>& x,
                        const std::vector<double>& y);

// Averages a reweight function over every permutation of 0..V-1.
// Used to check distribution preservation for small vocabularies.
template <typename Reweight>
Eigen::VectorXd permutation_average(int vocab_size, Reweight reweight) {
  std::vector<int32_t> perm(static_cast<size_t>(vocab_size));
  for (int i = 0; i < vocab_size; ++i) perm[static_cast<size_t>(i)] = i;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(vocab_size);
  long count = 0;
  do {
    acc += reweight(perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / static_cast<double>(count);
}

}  // namespace oracles
