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

#include "wmeval/metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "wmeval/vocab.hpp"

namespace wmeval {

double tpr_at_fpr0(const ScorePair& pairs) {
  if (pairs.positives.empty() || pairs.negatives.empty())
    throw std::invalid_argument("score lists must be non-empty");
  const bool higher = pairs.direction == ScoreDirection::higher_is_positive;
  const double threshold =
      higher ? *std::max_element(pairs.negatives.begin(), pairs.negatives.end())
             : *std::min_element(pairs.negatives.begin(), pairs.negatives.end());
  int hits = 0;
  for (double s : pairs.positives)
    if (higher ? s > threshold : s < threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pairs.positives.size());
}

double auroc(const ScorePair& pairs) {
  if (pairs.positives.empty() || pairs.negatives.empty())
    throw std::invalid_argument("score lists must be non-empty");
  const bool higher = pairs.direction == ScoreDirection::higher_is_positive;

  // Midrank formulation of the Mann-Whitney statistic.
  struct Tagged {
    double score;
    bool positive;
  };
  std::vector<Tagged> all;
  all.reserve(pairs.positives.size() + pairs.negatives.size());
  for (double s : pairs.positives) all.push_back({higher ? s : -s, true});
  for (double s : pairs.negatives) all.push_back({higher ? s : -s, false});
  std::sort(all.begin(), all.end(),
            [](const Tagged& a, const Tagged& b) { return a.score < b.score; });

  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < all.size()) {
    size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) +
                                  static_cast<double>(j));
    for (size_t k = i; k < j; ++k)
      if (all[k].positive) rank_sum_pos += midrank;
    i = j;
  }
  const double np = static_cast<double>(pairs.positives.size());
  const double nn = static_cast<double>(pairs.negatives.size());
  const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

namespace {

std::map<std::vector<std::string>, int> ngram_counts(
    const std::vector<std::string>& tokens, int n) {
  std::map<std::vector<std::string>, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (size_t i = 0; i + static_cast<size_t>(n) <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<long>(i),
                                      tokens.begin() + static_cast<long>(i) +
                                          n)];
  return counts;
}

double f_measure(double overlap, double cand_total, double ref_total) {
  if (overlap <= 0.0 || cand_total <= 0.0 || ref_total <= 0.0) return 0.0;
  const double p = overlap / cand_total;
  const double r = overlap / ref_total;
  return 2.0 * p * r / (p + r);
}

}  // namespace

double rouge_n(const std::string& candidate, const std::string& reference,
               int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto cand = ngram_counts(tokenize_words(candidate), n);
  const auto ref = ngram_counts(tokenize_words(reference), n);
  double cand_total = 0.0, ref_total = 0.0, overlap = 0.0;
  for (const auto& [g, c] : cand) cand_total += c;
  for (const auto& [g, c] : ref) ref_total += c;
  for (const auto& [g, c] : cand) {
    auto it = ref.find(g);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }
  return f_measure(overlap, cand_total, ref_total);
}

double rouge_l(const std::string& candidate, const std::string& reference) {
  const auto cand = tokenize_words(candidate);
  const auto ref = tokenize_words(reference);
  if (cand.empty() || ref.empty()) return 0.0;

  // Classic O(|cand| * |ref|) LCS table with two rolling rows.
  std::vector<int> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
  for (size_t i = 1; i <= cand.size(); ++i) {
    for (size_t j = 1; j <= ref.size(); ++j) {
      cur[j] = cand[i - 1] == ref[j - 1] ? prev[j - 1] + 1
                                         : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = prev[ref.size()];
  return f_measure(lcs, static_cast<double>(cand.size()),
                   static_cast<double>(ref.size()));
}

double token_f1(const std::string& candidate, const std::string& reference) {
  const auto cand = ngram_counts(tokenize_words(candidate), 1);
  const auto ref = ngram_counts(tokenize_words(reference), 1);
  double cand_total = 0.0, ref_total = 0.0, overlap = 0.0;
  for (const auto& [g, c] : cand) cand_total += c;
  for (const auto& [g, c] : ref) ref_total += c;
  for (const auto& [g, c] : cand) {
    auto it = ref.find(g);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }
  return f_measure(overlap, cand_total, ref_total);
}

}  // namespace wmeval
