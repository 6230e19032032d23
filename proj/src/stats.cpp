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

#include "wmeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wmeval {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("pearson: need >= 3 points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::Map<const Eigen::VectorXd> vx(x.data(), n);
  Eigen::Map<const Eigen::VectorXd> vy(y.data(), n);
  const Eigen::VectorXd cx = vx.array() - vx.mean();
  const Eigen::VectorXd cy = vy.array() - vy.mean();
  const double sx = cx.squaredNorm();
  const double sy = cy.squaredNorm();
  if (sx == 0.0 || sy == 0.0)
    throw UndefinedCorrelationError("pearson: constant input");
  return cx.dot(cy) / std::sqrt(sx * sy);
}

namespace {

// ln Gamma(a) via the Lanczos-free path: std::lgamma is deterministic
// enough for our p-values.
double gamma_q_series(double a, double x) {
  // P(a,x) by series, then Q = 1 - P.
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  return 1.0 - p;
}

double gamma_q_continued_fraction(double a, double x) {
  // Modified Lentz evaluation of the continued fraction for Q(a, x).
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma_q: a must be positive");
  if (x < 0.0) throw std::invalid_argument("gamma_q: x must be non-negative");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? gamma_q_series(a, x) : gamma_q_continued_fraction(a, x);
}

double chi_squared_sf(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi_squared_sf: df must be >= 1");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

namespace {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * 0.3989422804014327;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

}  // namespace

double studentized_range_cdf(double q, int k) {
  if (k < 2) throw std::invalid_argument("studentized range needs k >= 2");
  if (q <= 0.0) return 0.0;
  // P(Q <= q) = k * Integral phi(z) * [Phi(z) - Phi(z - q)]^(k-1) dz at
  // infinite degrees of freedom. Composite Simpson over z in [-9, 9 + q].
  const double lo = -9.0;
  const double hi = 9.0 + q;
  const int steps = 4000;  // even
  const double h = (hi - lo) / steps;
  auto f = [&](double z) {
    const double inner = normal_cdf(z) - normal_cdf(z - q);
    return normal_pdf(z) * std::pow(inner, k - 1);
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < steps; ++i)
    acc += f(lo + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  const double cdf = k * acc * h / 3.0;
  return std::clamp(cdf, 0.0, 1.0);
}

double studentized_range_q05(int k) {
  // Critical values at alpha = 0.05, infinite degrees of freedom.
  static constexpr double kTable[] = {2.772, 3.314, 3.633, 3.858, 4.030,
                                      4.170, 4.286, 4.387, 4.474};
  if (k < 2 || k > 10)
    throw std::invalid_argument("studentized range table covers k in [2, 10]");
  return kTable[k - 2];
}

const NemenyiPair& FriedmanNemenyiResult::pairwise(int i, int j) const {
  if (i == j) throw std::invalid_argument("pairwise needs distinct columns");
  const auto key = std::make_pair(std::min(i, j), std::max(i, j));
  return pairs.at(key);
}

FriedmanNemenyiResult friedman_nemenyi(const RatingMatrix& matrix) {
  const auto n = static_cast<int>(matrix.cells.rows());
  const auto k = static_cast<int>(matrix.cells.cols());
  if (n < 3 || k < 2)
    throw std::invalid_argument("need >= 3 rows and >= 2 columns");
  if (k > 10)
    throw std::invalid_argument("more than 10 columns is unsupported");
  if (!matrix.cells.allFinite())
    throw std::invalid_argument("missing or non-finite cells");

  // Within-row midranks.
  Eigen::VectorXd rank_mean = Eigen::VectorXd::Zero(k);
  std::vector<int> idx(static_cast<size_t>(k));
  for (int r = 0; r < n; ++r) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return matrix.cells(r, a) < matrix.cells(r, b);
    });
    int i = 0;
    while (i < k) {
      int j = i;
      while (j < k &&
             matrix.cells(r, idx[static_cast<size_t>(j)]) ==
                 matrix.cells(r, idx[static_cast<size_t>(i)]))
        ++j;
      const double midrank = 0.5 * ((i + 1) + j);
      for (int t = i; t < j; ++t)
        rank_mean[idx[static_cast<size_t>(t)]] += midrank;
      i = j;
    }
  }
  rank_mean /= static_cast<double>(n);

  FriedmanNemenyiResult result;
  const double center = (k + 1) / 2.0;
  result.friedman_stat = 12.0 * n / (k * (k + 1.0)) *
                         (rank_mean.array() - center).square().sum();
  result.friedman_p = chi_squared_sf(result.friedman_stat, k - 1);

  // Nemenyi pairwise p from the studentized range at infinite df.
  const double scale = std::sqrt(k * (k + 1.0) / (6.0 * n));
  const double q05 = studentized_range_q05(k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double q =
          std::abs(rank_mean[i] - rank_mean[j]) / scale * std::sqrt(2.0);
      NemenyiPair pair;
      pair.p = 1.0 - studentized_range_cdf(q, k);
      pair.significant_at_05 = q > q05;
      result.pairs.emplace(std::make_pair(i, j), pair);
    }
  }
  return result;
}

}  // namespace wmeval
