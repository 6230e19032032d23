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

#include "wmeval/factuality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace wmeval {

namespace {

void add_to_histogram(Eigen::VectorXd& hist, double entropy) {
  int bin = static_cast<int>(entropy / EntropyProfile::kBinWidth);
  if (bin < 0) bin = 0;
  if (bin >= EntropyProfile::kBins) bin = EntropyProfile::kBins;  // overflow
  hist[bin] += 1.0;
}

}  // namespace

std::optional<double> EntropyProfile::entropy_at(int token_index) const {
  const int i = token_index - first_index;
  if (i < 0 || i >= static_cast<int>(per_token.size())) return std::nullopt;
  return per_token[static_cast<size_t>(i)].second;
}

EntropyProfile entropy_profile(const TokenSeq& seq, const NgramModel& model) {
  if (seq.size() < 2)
    throw std::invalid_argument("entropy profile needs at least 2 tokens");
  const auto entropies = model.per_token_entropies(seq);
  return entropy_profile_from(
      std::span<const TokenId>(seq.ids).subspan(1),
      std::span<const double>(entropies).subspan(1), /*first_index=*/1);
}

EntropyProfile entropy_profile_from(std::span<const TokenId> ids,
                                    std::span<const double> entropies,
                                    int first_index) {
  if (ids.size() != entropies.size())
    throw std::invalid_argument("ids/entropies length mismatch");
  EntropyProfile profile;
  profile.first_index = first_index;
  profile.per_token.reserve(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    profile.per_token.emplace_back(ids[i], entropies[i]);
    add_to_histogram(profile.histogram, entropies[i]);
  }
  return profile;
}

double histogram_shift(const EntropyProfile& reference,
                       const EntropyProfile& candidate) {
  const double ref_mass = reference.histogram.sum();
  const double cand_mass = candidate.histogram.sum();
  if (ref_mass <= 0.0 || cand_mass <= 0.0)
    throw std::invalid_argument("empty histogram");
  return 0.5 * (reference.histogram / ref_mass -
                candidate.histogram / cand_mass)
                   .cwiseAbs()
                   .sum();
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open gazetteer: " + path.string());
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] != '#') terms.push_back(line);
  }
  return from_terms(terms);
}

Gazetteer Gazetteer::from_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) throw std::invalid_argument("empty gazetteer");
  Gazetteer g;
  for (const auto& term : terms) {
    auto tokens = tokenize_words(term);
    if (tokens.empty()) continue;
    std::string canonical;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) canonical.push_back(' ');
      canonical += tokens[i];
    }
    g.terms_.emplace_back(std::move(tokens), std::move(canonical));
  }
  if (g.terms_.empty()) throw std::invalid_argument("empty gazetteer");
  // Longest first so the scan below is leftmost-longest.
  std::stable_sort(g.terms_.begin(), g.terms_.end(),
                   [](const auto& a, const auto& b) {
                     return a.first.size() > b.first.size();
                   });
  return g;
}

std::vector<EntitySpan> extract_entities(const std::string& text,
                                         const Gazetteer& gazetteer) {
  if (gazetteer.empty()) throw std::invalid_argument("empty gazetteer");
  const auto tokens = tokenize_words(text);
  std::vector<EntitySpan> spans;
  size_t pos = 0;
  while (pos < tokens.size()) {
    const auto* hit = static_cast<const std::pair<std::vector<std::string>,
                                                  std::string>*>(nullptr);
    for (const auto& term : gazetteer.terms()) {
      const auto& words = term.first;
      if (pos + words.size() > tokens.size()) continue;
      if (std::equal(words.begin(), words.end(), tokens.begin() +
                                                     static_cast<long>(pos))) {
        hit = &term;
        break;  // terms are longest-first
      }
    }
    if (hit == nullptr) {
      ++pos;
      continue;
    }
    EntitySpan span;
    span.start = static_cast<int>(pos);
    span.end = static_cast<int>(pos + hit->first.size());
    span.canonical = hit->second;
    for (size_t i = pos; i < pos + hit->first.size(); ++i) {
      if (i > pos) span.surface.push_back(' ');
      span.surface += tokens[i];
    }
    spans.push_back(std::move(span));
    pos += hit->first.size();
  }
  return spans;
}

namespace {

// Linearly interpolated quantile of sorted values (numpy convention).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::map<std::string, QuartileStats> entity_entropy_stats(
    const std::vector<EntitySpan>& spans, const EntropyProfile& profile) {
  std::map<std::string, std::vector<double>> samples;
  for (const auto& span : spans) {
    for (int t = span.start; t < span.end; ++t) {
      if (const auto h = profile.entropy_at(t))
        samples[span.canonical].push_back(*h);
    }
  }
  std::map<std::string, QuartileStats> out;
  for (auto& [canonical, values] : samples) {
    std::sort(values.begin(), values.end());
    QuartileStats stats;
    stats.count = static_cast<int>(values.size());
    stats.q1 = quantile_sorted(values, 0.25);
    stats.median = quantile_sorted(values, 0.5);
    stats.q3 = quantile_sorted(values, 0.75);
    out.emplace(canonical, stats);
  }
  return out;
}

HallucinationReport hallucination_report(const std::string& candidate,
                                         const std::string& reference,
                                         const Gazetteer& gazetteer,
                                         const SimilarityProvider& embed,
                                         double threshold) {
  const auto cand_spans = extract_entities(candidate, gazetteer);
  const auto ref_spans = extract_entities(reference, gazetteer);

  std::set<std::string> ref_canonicals;
  for (const auto& s : ref_spans) ref_canonicals.insert(s.canonical);

  HallucinationReport report;
  report.threshold = threshold;
  std::set<std::string> seen;
  int below = 0;
  for (const auto& span : cand_spans) {
    if (ref_canonicals.count(span.canonical) || seen.count(span.canonical))
      continue;
    seen.insert(span.canonical);
    report.introduced_entities.push_back(span);
    double best = 0.0;  // vacuous max when the reference has no entities
    if (!ref_canonicals.empty()) {
      const Eigen::VectorXd v = embed.embed(span.canonical);
      for (const auto& ref_c : ref_canonicals)
        best = std::max(best, v.dot(embed.embed(ref_c)));
    }
    if (best < threshold) ++below;
  }
  const auto n_introduced = report.introduced_entities.size();
  report.avg_introduced = static_cast<double>(n_introduced);
  report.hallucination_rate =
      static_cast<double>(below) /
      std::max<double>(1.0, static_cast<double>(n_introduced));
  return report;
}

}  // namespace wmeval
