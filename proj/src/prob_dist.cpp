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

#include "wmeval/prob_dist.hpp"

#include <cmath>
#include <stdexcept>

namespace wmeval {

namespace {
constexpr double kSumTolerance = 1e-9;
}

ProbDist::ProbDist(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) throw std::invalid_argument("empty distribution");
  if ((probs_.array() < 0.0).any())
    throw std::invalid_argument("negative probability");
  if (std::abs(probs_.sum() - 1.0) > kSumTolerance)
    throw std::invalid_argument("probabilities do not sum to 1");
}

ProbDist ProbDist::from_unnormalized(Eigen::VectorXd weights) {
  double total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("weights have no positive finite mass");
  weights /= total;
  return ProbDist(std::move(weights));
}

ProbDist ProbDist::with_entropy(Eigen::VectorXd probs, double entropy_nats) {
  ProbDist d(std::move(probs));
  d.entropy_ = entropy_nats;
  d.entropy_valid_ = true;
  return d;
}

double ProbDist::entropy_nats() const {
  if (!entropy_valid_) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
      double p = probs_[i];
      if (p > 0.0) h -= p * std::log(p);
    }
    entropy_ = h;
    entropy_valid_ = true;
  }
  return entropy_;
}

}  // namespace wmeval
