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

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wmeval {

using TokenId = int32_t;

// Ordered token-id sequence. Ids are indices into a Vocab.
struct TokenSeq {
  std::vector<TokenId> ids;

  TokenSeq() = default;
  explicit TokenSeq(std::vector<TokenId> v) : ids(std::move(v)) {}

  int size() const { return static_cast<int>(ids.size()); }
  bool empty() const { return ids.empty(); }
  TokenId operator[](int i) const { return ids[static_cast<size_t>(i)]; }
  void push_back(TokenId id) { ids.push_back(id); }

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

// Token string <-> id mapping. Ids 0 and 1 are reserved for the unknown
// and begin-of-sequence markers and exist in every vocabulary.
class Vocab {
 public:
  static constexpr TokenId kUnkId = 0;
  static constexpr TokenId kBosId = 1;

  Vocab();

  // Returns the id of `token`, inserting it if absent.
  TokenId add(std::string_view token);

  // Returns the id of `token`, or kUnkId if absent.
  TokenId id(std::string_view token) const;

  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  int size() const { return static_cast<int>(id_to_token_.size()); }

  const std::vector<std::string>& tokens() const { return id_to_token_; }

  friend bool operator==(const Vocab&, const Vocab&);

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

// Lowercases `text` and splits it into word tokens: runs of letters/digits
// (bytes >= 0x80 count as letters) separated by whitespace, with each
// punctuation character emitted as a standalone token.
std::vector<std::string> tokenize_words(std::string_view text);

// tokenize_words followed by vocab lookup; unknown words map to kUnkId.
TokenSeq tokenize(std::string_view text, const Vocab& vocab);

// Joins tokens with single spaces. Inverse of tokenize up to whitespace
// normalization and unknown-token loss.
std::string detokenize(const TokenSeq& seq, const Vocab& vocab);

}  // namespace wmeval
