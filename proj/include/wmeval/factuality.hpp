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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmeval/ngram_model.hpp"
#include "wmeval/similarity.hpp"
#include "wmeval/vocab.hpp"

namespace wmeval {

// Per-token entropies of a sequence plus a fixed-bin histogram:
// 32 bins of width 0.25 over [0, 8) and one overflow bin.
struct EntropyProfile {
  static constexpr int kBins = 32;
  static constexpr double kBinWidth = 0.25;

  // per_token[i] is (token id, entropy) for sequence position first_index+i.
  std::vector<std::pair<TokenId, double>> per_token;
  int first_index = 1;
  Eigen::VectorXd histogram = Eigen::VectorXd::Zero(kBins + 1);

  int total_mass() const { return static_cast<int>(per_token.size()); }
  std::optional<double> entropy_at(int token_index) const;
};

// Entropies recomputed with the reference model for positions 1..len-1.
EntropyProfile entropy_profile(const TokenSeq& seq, const NgramModel& model);

// Profile from entropies recorded at generation time (aligned with ids).
EntropyProfile entropy_profile_from(std::span<const TokenId> ids,
                                    std::span<const double> entropies,
                                    int first_index);

// Total-variation distance between the normalized histograms, in [0, 1].
double histogram_shift(const EntropyProfile& reference,
                       const EntropyProfile& candidate);

// Plain-text list of canonical disease terms, one per line, lowercase.
class Gazetteer {
 public:
  static Gazetteer load(const std::filesystem::path& path);
  static Gazetteer from_terms(const std::vector<std::string>& terms);

  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  // Token sequences of each canonical term, longest first.
  const std::vector<std::pair<std::vector<std::string>, std::string>>& terms()
      const {
    return terms_;
  }

 private:
  std::vector<std::pair<std::vector<std::string>, std::string>> terms_;
};

struct EntitySpan {
  std::string surface;
  int start = 0;  // token index, inclusive
  int end = 0;    // token index, exclusive
  std::string canonical;
};

// Leftmost-longest case-insensitive multi-word matching over the word
// tokenizer. Output spans never overlap and ascend by start index.
std::vector<EntitySpan> extract_entities(const std::string& text,
                                         const Gazetteer& gazetteer);

struct QuartileStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  int count = 0;
};

// Aggregates the entropies of all tokens inside each canonical's spans.
// Quartiles use linear interpolation between order statistics.
std::map<std::string, QuartileStats> entity_entropy_stats(
    const std::vector<EntitySpan>& spans, const EntropyProfile& profile);

struct HallucinationReport {
  std::vector<EntitySpan> introduced_entities;  // one span per canonical
  double avg_introduced = 0.0;
  double hallucination_rate = 0.0;
  double threshold = 0.6;
};

// Introduced = candidate canonicals absent from the reference entities.
// Each introduced entity's similarity is its best cosine against any
// reference entity (0 when the reference has none); the rate is the
// fraction of introduced entities below the threshold.
HallucinationReport hallucination_report(const std::string& candidate,
                                         const std::string& reference,
                                         const Gazetteer& gazetteer,
                                         const SimilarityProvider& embed,
                                         double threshold = 0.6);

}  // namespace wmeval
