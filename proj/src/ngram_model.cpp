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

#include "wmeval/ngram_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace wmeval {

namespace {

constexpr uint32_t kMagic = 0x474E4D57;  // "WMNG"
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated model file");
  return v;
}

}  // namespace

NgramModel::NgramModel(Vocab vocab, int order, double smoothing_k)
    : vocab_(std::move(vocab)), order_(order), smoothing_k_(smoothing_k) {
  if (order_ < 1 || order_ > 5)
    throw std::invalid_argument("order must be in [1, 5]");
  if (smoothing_k_ < 0.0)
    throw std::invalid_argument("smoothing_k must be non-negative");
  tables_.resize(static_cast<size_t>(order_));
}

NgramModel NgramModel::train(const std::vector<std::string>& corpus, int order,
                             double smoothing_k) {
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");
  if (!(smoothing_k > 0.0))
    throw std::invalid_argument("smoothing_k must be positive");

  Vocab vocab;
  std::vector<TokenSeq> docs;
  docs.reserve(corpus.size());
  for (const auto& doc : corpus) {
    TokenSeq seq;
    seq.push_back(Vocab::kBosId);
    for (const auto& w : tokenize_words(doc)) seq.push_back(vocab.add(w));
    docs.push_back(std::move(seq));
  }

  NgramModel model(std::move(vocab), order, smoothing_k);
  for (const auto& doc : docs) {
    // Position 0 is the BOS pad; it is context only, never predicted.
    for (int t = 1; t < doc.size(); ++t) {
      for (int n = 0; n < order && n <= t; ++n) {
        model.add_count(std::span<const TokenId>(doc.ids).subspan(
                            static_cast<size_t>(t - n), static_cast<size_t>(n)),
                        doc[t]);
      }
    }
  }
  model.finalize();
  return model;
}

void NgramModel::add_sequence(std::span<const TokenId> seq) {
  for (size_t t = 0; t < seq.size(); ++t) {
    for (int n = 0; n < order_ && n <= static_cast<int>(t); ++n)
      add_count(seq.subspan(t - static_cast<size_t>(n), static_cast<size_t>(n)),
                seq[t]);
  }
}

void NgramModel::add_count(std::span<const TokenId> context, TokenId token,
                           uint64_t count) {
  if (static_cast<int>(context.size()) >= order_)
    throw std::invalid_argument("context longer than order-1");
  auto& cc = tables_[context.size()][std::vector<TokenId>(context.begin(),
                                                          context.end())];
  cc.total += count;
  auto it = std::find_if(cc.tokens.begin(), cc.tokens.end(),
                         [&](const auto& p) { return p.first == token; });
  if (it == cc.tokens.end())
    cc.tokens.emplace_back(token, count);
  else
    it->second += count;
  finalized_ = false;
}

void NgramModel::finalize() {
  for (auto& table : tables_)
    for (auto& [ctx, cc] : table)
      std::sort(cc.tokens.begin(), cc.tokens.end());
  finalized_ = true;
}

const NgramModel::ContextCounts* NgramModel::find_context(
    int ctx_len, std::span<const TokenId> ctx) const {
  const auto& table = tables_[static_cast<size_t>(ctx_len)];
  auto it = table.find(std::vector<TokenId>(ctx.begin(), ctx.end()));
  return it == table.end() ? nullptr : &it->second;
}

ProbDist NgramModel::next_dist(std::span<const TokenId> context) const {
  const int vsize = vocab_.size();
  const int max_ctx =
      std::min<int>(order_ - 1, static_cast<int>(context.size()));

  // Interpolate the orders whose context has been observed.
  std::vector<std::pair<const ContextCounts*, double>> included;
  for (int n = max_ctx; n >= 0; --n) {
    const auto* cc = find_context(n, context.subspan(context.size() -
                                                     static_cast<size_t>(n)));
    if (cc != nullptr && cc->total > 0)
      included.emplace_back(cc, 0.0);  // denominator filled below
  }
  if (included.empty())
    throw std::logic_error("model has no counts for any order");

  const double w = 1.0 / static_cast<double>(included.size());
  double floor = 0.0;
  for (auto& [cc, denom] : included) {
    denom = static_cast<double>(cc->total) + smoothing_k_ * vsize;
    floor += w * smoothing_k_ / denom;
  }

  Eigen::VectorXd probs = Eigen::VectorXd::Constant(vsize, floor);
  std::vector<char> touched(static_cast<size_t>(vsize), 0);
  std::vector<TokenId> seen;
  for (const auto& [cc, denom] : included) {
    for (const auto& [tok, cnt] : cc->tokens) {
      probs[tok] += w * static_cast<double>(cnt) / denom;
      if (!touched[static_cast<size_t>(tok)]) {
        touched[static_cast<size_t>(tok)] = 1;
        seen.push_back(tok);
      }
    }
  }

  // Entropy from the sparse structure: all untouched ids share the floor.
  double h = 0.0;
  for (TokenId tok : seen) {
    double p = probs[tok];
    if (p > 0.0) h -= p * std::log(p);
  }
  const int n_floor = vsize - static_cast<int>(seen.size());
  if (n_floor > 0 && floor > 0.0) h -= n_floor * floor * std::log(floor);

  return ProbDist::with_entropy(std::move(probs), h);
}

std::vector<LogpRank> NgramModel::log_prob_and_rank(const TokenSeq& seq) const {
  if (seq.empty()) throw std::invalid_argument("empty sequence");
  std::vector<LogpRank> out;
  out.reserve(static_cast<size_t>(seq.size()) - 1);
  for (int t = 1; t < seq.size(); ++t) {
    ProbDist dist =
        next_dist(std::span<const TokenId>(seq.ids).first(
            static_cast<size_t>(t)));
    const double py = dist[seq[t]];
    int rank = 1;
    for (TokenId u = 0; u < dist.size(); ++u) {
      if (dist[u] > py || (dist[u] == py && u < seq[t])) ++rank;
    }
    out.push_back({std::log(py), rank});
  }
  return out;
}

double NgramModel::perplexity(const TokenSeq& seq) const {
  if (seq.size() < 2)
    throw std::invalid_argument("perplexity needs at least 2 tokens");
  double total = 0.0;
  int n = 0;
  for (const auto& lr : log_prob_and_rank(seq)) {
    total += lr.logp;
    ++n;
  }
  return std::exp(-total / n);
}

std::vector<double> NgramModel::per_token_entropies(const TokenSeq& seq) const {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(seq.size()));
  for (int t = 0; t < seq.size(); ++t) {
    out.push_back(next_dist(std::span<const TokenId>(seq.ids).first(
                                static_cast<size_t>(t)))
                      .entropy_nats());
  }
  return out;
}

void NgramModel::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  write_pod(os, kMagic);
  write_pod(os, kVersion);
  write_pod(os, static_cast<int32_t>(order_));
  uint64_t kbits;
  std::memcpy(&kbits, &smoothing_k_, sizeof(kbits));
  write_pod(os, kbits);
  write_pod(os, static_cast<uint32_t>(vocab_.size()));
  for (const auto& tok : vocab_.tokens()) {
    write_pod(os, static_cast<uint32_t>(tok.size()));
    os.write(tok.data(), static_cast<std::streamsize>(tok.size()));
  }
  for (const auto& table : tables_) {
    write_pod(os, static_cast<uint64_t>(table.size()));
    for (const auto& [ctx, cc] : table) {
      for (TokenId id : ctx) write_pod(os, id);
      write_pod(os, cc.total);
      write_pod(os, static_cast<uint32_t>(cc.tokens.size()));
      for (const auto& [tok, cnt] : cc.tokens) {
        write_pod(os, tok);
        write_pod(os, cnt);
      }
    }
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

NgramModel NgramModel::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  if (read_pod<uint32_t>(is) != kMagic)
    throw std::runtime_error("not a model file: " + path.string());
  if (read_pod<uint32_t>(is) != kVersion)
    throw std::runtime_error("unsupported model version");
  const int order = read_pod<int32_t>(is);
  const uint64_t kbits = read_pod<uint64_t>(is);
  double k;
  std::memcpy(&k, &kbits, sizeof(k));

  Vocab vocab;
  const uint32_t vsize = read_pod<uint32_t>(is);
  for (uint32_t i = 0; i < vsize; ++i) {
    const uint32_t len = read_pod<uint32_t>(is);
    std::string tok(len, '\0');
    is.read(tok.data(), len);
    if (!is) throw std::runtime_error("truncated model file");
    vocab.add(tok);
  }
  if (vocab.size() != static_cast<int>(vsize))
    throw std::runtime_error("corrupt vocabulary table");

  NgramModel model(std::move(vocab), order, k);
  for (int n = 0; n < order; ++n) {
    const uint64_t n_ctx = read_pod<uint64_t>(is);
    auto& table = model.tables_[static_cast<size_t>(n)];
    auto hint = table.end();
    for (uint64_t c = 0; c < n_ctx; ++c) {
      std::vector<TokenId> ctx(static_cast<size_t>(n));
      for (auto& id : ctx) id = read_pod<TokenId>(is);
      ContextCounts cc;
      cc.total = read_pod<uint64_t>(is);
      const uint32_t entries = read_pod<uint32_t>(is);
      cc.tokens.reserve(entries);
      for (uint32_t e = 0; e < entries; ++e) {
        TokenId tok = read_pod<TokenId>(is);
        uint64_t cnt = read_pod<uint64_t>(is);
        cc.tokens.emplace_back(tok, cnt);
      }
      hint = table.emplace_hint(hint, std::move(ctx), std::move(cc));
    }
  }
  model.finalized_ = true;
  return model;
}

bool operator==(const NgramModel& a, const NgramModel& b) {
  auto tables_equal = [](const NgramModel::Table& x,
                         const NgramModel::Table& y) {
    if (x.size() != y.size()) return false;
    for (auto itx = x.begin(), ity = y.begin(); itx != x.end(); ++itx, ++ity) {
      if (itx->first != ity->first || itx->second.total != ity->second.total ||
          itx->second.tokens != ity->second.tokens)
        return false;
    }
    return true;
  };
  if (!(a.vocab_ == b.vocab_) || a.order_ != b.order_ ||
      a.smoothing_k_ != b.smoothing_k_ || a.tables_.size() != b.tables_.size())
    return false;
  for (size_t i = 0; i < a.tables_.size(); ++i)
    if (!tables_equal(a.tables_[i], b.tables_[i])) return false;
  return true;
}

}  // namespace wmeval
