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

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

uint64_t ref_splitmix64(uint64_t& state) {
  state += UINT64_C(0x9E3779B97F4A7C15);
  uint64_t z = state;
  z ^= z >> 30;
  z *= UINT64_C(0xBF58476D1CE4E5B9);
  z ^= z >> 27;
  z *= UINT64_C(0x94D049BB133111EB);
  z ^= z >> 31;
  return z;
}

uint64_t ref_hash_chain(uint64_t key, const std::vector<int32_t>& ids) {
  uint64_t state = key;
  uint64_t h = ref_splitmix64(state);
  const std::vector<int32_t> effective = ids.empty()
                                             ? std::vector<int32_t>{1}
                                             : ids;
  for (int32_t id : effective) {
    state = h ^ static_cast<uint64_t>(static_cast<uint32_t>(id));
    h = ref_splitmix64(state);
  }
  return h;
}

namespace {

double brute_align_rec(const std::vector<int32_t>& y, size_t yi,
                       const Eigen::MatrixXd& xi, size_t xj, double g) {
  const size_t y_left = y.size() - yi;
  const size_t x_left = static_cast<size_t>(xi.rows()) - xj;
  if (y_left == 0) return x_left == 0 ? 0.0 : g * static_cast<double>(x_left);
  if (x_left == 0) return g * static_cast<double>(y_left);
  const double match =
      brute_align_rec(y, yi + 1, xi, xj + 1, g) +
      std::log(1.0 - xi(static_cast<Eigen::Index>(xj), y[yi]));
  const double del = brute_align_rec(y, yi, xi, xj + 1, g) + g;
  const double ins = brute_align_rec(y, yi + 1, xi, xj, g) + g;
  return std::min(match, std::min(del, ins));
}

}  // namespace

double brute_align_cost(const std::vector<int32_t>& y,
                        const Eigen::MatrixXd& xi_block, double gamma_edit) {
  return brute_align_rec(y, 0, xi_block, 0, gamma_edit);
}

double brute_auroc(const std::vector<double>& positives,
                   const std::vector<double>& negatives) {
  if (positives.empty() || negatives.empty())
    throw std::invalid_argument("empty score lists");
  double score = 0.0;
  for (double p : positives) {
    for (double n : negatives) {
      if (p > n)
        score += 1.0;
      else if (p == n)
        score += 0.5;
    }
  }
  return score / (static_cast<double>(positives.size()) *
                  static_cast<double>(negatives.size()));
}

double two_pass_pearson(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("bad inputs");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracles
