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
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace wmeval {

// Interchangeable sentence-embedding function. Embeddings are unit vectors
// (norm 1 within 1e-6) and deterministic per input.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual Eigen::VectorXd embed(const std::string& text) const = 0;
};

// Cosine of the provider's embeddings, in [-1, 1].
double similarity(const std::string& candidate, const std::string& reference,
                  const SimilarityProvider& provider);

// Default offline provider: TF-IDF weighted bag-of-words over a reference
// corpus, L2-normalized. Out-of-vocabulary words contribute nothing; texts
// with no known words embed to a reserved unit axis.
class TfidfProvider : public SimilarityProvider {
 public:
  static TfidfProvider fit(const std::vector<std::string>& corpus);

  Eigen::VectorXd embed(const std::string& text) const override;
  int dimension() const { return static_cast<int>(idf_.size()) + 1; }

 private:
  TfidfProvider() = default;
  std::unordered_map<std::string, int> index_;
  Eigen::VectorXd idf_;
};

// Wraps another provider with a lookup table of precomputed embeddings
// loaded from JSONL lines {"text_hash": "<16 hex digits>", "vector": [..]}.
// The hash is fnv1a64 of the raw text bytes. Lookups that miss fall back to
// the inner provider and are counted.
class FileEmbeddingProvider : public SimilarityProvider {
 public:
  FileEmbeddingProvider(const std::filesystem::path& jsonl_path,
                        std::shared_ptr<const SimilarityProvider> fallback);

  Eigen::VectorXd embed(const std::string& text) const override;
  int64_t fallback_count() const { return fallback_count_; }
  size_t table_size() const { return table_.size(); }

 private:
  std::unordered_map<uint64_t, Eigen::VectorXd> table_;
  std::shared_ptr<const SimilarityProvider> fallback_;
  mutable int64_t fallback_count_ = 0;
};

}  // namespace wmeval
