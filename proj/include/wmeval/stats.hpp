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
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wmeval {

// Raised for correlations on constant inputs.
struct UndefinedCorrelationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Sample Pearson correlation. Throws UndefinedCorrelationError when either
// argument has zero variance, std::invalid_argument on length mismatch or
// fewer than 3 points.
double pearson(std::span<const double> x, std::span<const double> y);

// Regularized upper incomplete gamma Q(a, x): series for x < a+1,
// Lentz continued fraction otherwise.
double gamma_q(double a, double x);

// Chi-square survival function P(X > x) with df degrees of freedom.
double chi_squared_sf(double x, int df);

// CDF of the studentized range distribution with k groups and infinite
// degrees of freedom, by numeric integration.
double studentized_range_cdf(double q, int k);

// 0.05 critical values of the studentized range (infinite df) for
// k = 2..10 groups. Throws for k outside that range.
double studentized_range_q05(int k);

// Items x columns matrix of ratings; no missing cells.
struct RatingMatrix {
  Eigen::MatrixXd cells;
  std::vector<std::string> columns;  // optional labels, may be empty
};

struct NemenyiPair {
  double p = 1.0;
  bool significant_at_05 = false;
};

struct FriedmanNemenyiResult {
  double friedman_stat = 0.0;
  double friedman_p = 1.0;
  // Symmetric, keyed by (i, j) with i < j; query via pairwise_p().
  std::map<std::pair<int, int>, NemenyiPair> pairs;

  const NemenyiPair& pairwise(int i, int j) const;
};

// Friedman chi-square over within-row ranks (average ranks for ties) with
// Nemenyi post-hoc pairwise p-values from the studentized range
// distribution. Requires >= 3 rows and 2..10 columns.
FriedmanNemenyiResult friedman_nemenyi(const RatingMatrix& matrix);

}  // namespace wmeval
