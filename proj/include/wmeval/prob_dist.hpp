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

#include "wmeval/vocab.hpp"

namespace wmeval {

// A next-token probability vector over a vocabulary.
//
// Invariants: entries are non-negative and sum to 1 within 1e-9. The Shannon
// entropy (nats) is computed lazily and cached; constructors that already
// know it can seed the cache.
class ProbDist {
 public:
  // `probs` must already be a valid distribution.
  explicit ProbDist(Eigen::VectorXd probs);

  // Normalizes a non-negative weight vector with positive total mass.
  static ProbDist from_unnormalized(Eigen::VectorXd weights);

  // As ProbDist(probs) but with the entropy precomputed by the caller.
  static ProbDist with_entropy(Eigen::VectorXd probs, double entropy_nats);

  const Eigen::VectorXd& probs() const { return probs_; }
  double operator[](TokenId id) const { return probs_[id]; }
  int size() const { return static_cast<int>(probs_.size()); }

  // -sum p ln p, in nats.
  double entropy_nats() const;

 private:
  Eigen::VectorXd probs_;
  mutable double entropy_ = 0.0;
  mutable bool entropy_valid_ = false;
};

}  // namespace wmeval
