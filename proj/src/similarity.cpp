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

#include "wmeval/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "wmeval/hashing.hpp"
#include "wmeval/vocab.hpp"

namespace wmeval {

std::string to_hex64(uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

double similarity(const std::string& candidate, const std::string& reference,
                  const SimilarityProvider& provider) {
  const Eigen::VectorXd a = provider.embed(candidate);
  const Eigen::VectorXd b = provider.embed(reference);
  if (a.size() != b.size())
    throw std::invalid_argument("provider returned mismatched dimensions");
  return a.dot(b);
}

TfidfProvider TfidfProvider::fit(const std::vector<std::string>& corpus) {
  if (corpus.empty()) throw std::invalid_argument("empty similarity corpus");
  TfidfProvider provider;
  std::unordered_map<std::string, int> doc_freq;
  for (const auto& doc : corpus) {
    std::unordered_map<std::string, int> seen;
    for (const auto& w : tokenize_words(doc)) seen[w] = 1;
    for (const auto& [w, one] : seen) doc_freq[w] += one;
  }
  provider.idf_.resize(static_cast<Eigen::Index>(doc_freq.size()));
  const double n_docs = static_cast<double>(corpus.size());
  // Index in sorted order so fitting is independent of map iteration.
  std::vector<std::string> words;
  words.reserve(doc_freq.size());
  for (const auto& [w, df] : doc_freq) words.push_back(w);
  std::sort(words.begin(), words.end());
  for (size_t i = 0; i < words.size(); ++i) {
    provider.index_[words[i]] = static_cast<int>(i);
    provider.idf_[static_cast<Eigen::Index>(i)] =
        std::log((1.0 + n_docs) / (1.0 + doc_freq[words[i]])) + 1.0;
  }
  return provider;
}

Eigen::VectorXd TfidfProvider::embed(const std::string& text) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dimension());
  for (const auto& w : tokenize_words(text)) {
    auto it = index_.find(w);
    if (it != index_.end()) v[it->second] += idf_[it->second];
  }
  const double norm = v.norm();
  if (norm == 0.0) {
    // No known words: reserved axis keeps the unit-norm contract.
    v[dimension() - 1] = 1.0;
    return v;
  }
  return v / norm;
}

FileEmbeddingProvider::FileEmbeddingProvider(
    const std::filesystem::path& jsonl_path,
    std::shared_ptr<const SimilarityProvider> fallback)
    : fallback_(std::move(fallback)) {
  if (!fallback_) throw std::invalid_argument("fallback provider required");
  std::ifstream is(jsonl_path);
  if (!is)
    throw std::runtime_error("cannot open embedding file: " +
                             jsonl_path.string());
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const auto hash = std::stoull(j.at("text_hash").get<std::string>(),
                                  nullptr, 16);
    const auto& vec = j.at("vector");
    Eigen::VectorXd v(static_cast<Eigen::Index>(vec.size()));
    for (size_t i = 0; i < vec.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = vec[i].get<double>();
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    table_[hash] = std::move(v);
  }
}

Eigen::VectorXd FileEmbeddingProvider::embed(const std::string& text) const {
  auto it = table_.find(fnv1a64(text));
  if (it != table_.end()) return it->second;
  ++fallback_count_;
  return fallback_->embed(text);
}

}  // namespace wmeval
