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

#include "wmeval/corpus.hpp"

#include <fstream>
#include <stdexcept>

#include "wmeval/splitmix.hpp"

namespace wmeval {

namespace {

const std::vector<std::string> kDeterminers = {"the", "a",    "this", "each",
                                               "some", "most", "any"};

const std::vector<std::string> kNouns = {
    "patient",    "doctor",     "treatment", "symptom",   "dose",
    "medication", "therapy",    "condition", "tissue",    "nerve",
    "muscle",     "joint",      "vein",      "artery",    "lung",
    "heart",      "kidney",     "liver",     "skin",      "blood",
    "bone",       "gland",      "cell",      "response",  "recovery",
    "swelling",   "discomfort", "stiffness", "fatigue",   "fever",
    "rash",       "cough",      "appetite",  "sleep",     "diet",
    "exercise",   "pressure",   "pulse",     "scan",      "test",
    "result",     "history",    "specialist", "pharmacy", "tablet",
    "capsule",    "injection",  "ointment",  "syrup",     "remedy"};

const std::vector<std::string> kVerbs = {
    "reduce",  "cause",    "improve",  "affect",   "prevent",
    "relieve", "worsen",   "trigger",  "support",  "restore",
    "limit",   "increase", "decrease", "indicate", "require",
    "suggest", "monitor",  "control",  "ease",     "follow"};

const std::vector<std::string> kAux = {"may",    "can",    "should", "will",
                                       "often",  "rarely", "typically"};

const std::vector<std::string> kAdjectives = {
    "chronic",  "acute",     "mild",      "severe",  "common",
    "rare",     "persistent", "temporary", "serious", "minor",
    "gradual",  "sudden",    "frequent",  "general", "local"};

const std::vector<std::string> kConnectors = {
    "and", "but", "because", "while", "although", "so", "since"};

// Fixed chunks give the model reliably low-entropy continuations.
const std::vector<std::string> kCollocations = {
    "blood pressure",     "side effects",     "your doctor",
    "over time",          "in most cases",    "as needed",
    "immune response",    "follow up",        "long term",
    "short term",         "twice a day",      "with food",
    "without a prescription", "consult your doctor"};

std::vector<std::string> make_drug_names() {
  // Synthetic drug names widen the vocabulary.
  const std::vector<std::string> heads = {"dex",  "cort", "ami",  "lor",
                                          "pred", "metro", "keto", "ibu",
                                          "napro", "cipro", "azi",  "fluo"};
  const std::vector<std::string> mids = {"ta", "zo", "ri", "lo", "ve", "na"};
  const std::vector<std::string> tails = {"mol",  "zone", "pril", "olol",
                                          "micin", "fen",  "statin", "zepam"};
  std::vector<std::string> names;
  for (const auto& h : heads)
    for (const auto& m : mids)
      for (const auto& t : tails) names.push_back(h + m + t);
  return names;  // 576 names
}

class SentenceBuilder {
 public:
  explicit SentenceBuilder(SplitMix64& rng)
      : rng_(rng), drugs_(make_drug_names()) {}

  std::string document() {
    const int sentences = 3 + static_cast<int>(rng_.next_below(5));
    std::string doc;
    for (int s = 0; s < sentences; ++s) {
      if (s > 0) doc.push_back(' ');
      doc += sentence();
    }
    return doc;
  }

 private:
  SplitMix64& rng_;
  std::vector<std::string> drugs_;

  // Zipf-flavored pick: squaring the uniform biases toward the pool head.
  const std::string& zipf(const std::vector<std::string>& pool) {
    const double u = rng_.next_unit();
    const auto idx = static_cast<size_t>(u * u * static_cast<double>(pool.size()));
    return pool[std::min(idx, pool.size() - 1)];
  }

  const std::string& uniform(const std::vector<std::string>& pool) {
    return pool[rng_.next_below(pool.size())];
  }

  void append(std::string& out, const std::string& word) {
    if (!out.empty()) out.push_back(' ');
    out += word;
  }

  void noun_phrase(std::string& out) {
    append(out, zipf(kDeterminers));
    const uint64_t kind = rng_.next_below(10);
    if (kind < 2) {
      append(out, uniform(seed_disease_terms()));
    } else if (kind < 3) {
      append(out, uniform(drugs_));
    } else if (kind < 5) {
      append(out, zipf(kAdjectives));
      append(out, zipf(kNouns));
    } else {
      append(out, zipf(kNouns));
    }
  }

  void clause(std::string& out) {
    noun_phrase(out);
    append(out, zipf(kAux));
    append(out, zipf(kVerbs));
    noun_phrase(out);
    if (rng_.next_below(3) == 0) append(out, uniform(kCollocations));
  }

  void word_salad(std::string& out) {
    const int len = 5 + static_cast<int>(rng_.next_below(5));
    for (int i = 0; i < len; ++i) {
      switch (rng_.next_below(4)) {
        case 0: append(out, uniform(kNouns)); break;
        case 1: append(out, uniform(kVerbs)); break;
        case 2: append(out, uniform(kAdjectives)); break;
        default: append(out, uniform(drugs_)); break;
      }
    }
  }

  std::string sentence() {
    std::string out;
    if (rng_.next_below(100) < 15) {
      word_salad(out);
    } else {
      clause(out);
      if (rng_.next_below(100) < 35) {
        append(out, uniform(kConnectors));
        clause(out);
      }
    }
    out += rng_.next_below(100) < 8 ? " ;" : " .";
    return out;
  }
};

}  // namespace

const std::vector<std::string>& seed_disease_terms() {
  static const std::vector<std::string> terms = {
      "pain",          "infection",     "cancer",       "diabetes",
      "asthma",        "arthritis",     "hypertension", "migraine",
      "anemia",        "pneumonia",     "influenza",    "bronchitis",
      "eczema",        "depression",    "anxiety",      "insomnia",
      "obesity",       "stroke",        "ulcer",        "allergy",
      "chronic pain",  "lung cancer",   "heart disease",
      "kidney disease", "skin infection"};
  return terms;
}

std::vector<std::string> make_corpus(const CorpusOptions& options) {
  if (options.num_docs < 1)
    throw std::invalid_argument("num_docs must be positive");
  SplitMix64 rng(options.seed);
  SentenceBuilder builder(rng);
  std::vector<std::string> docs;
  docs.reserve(static_cast<size_t>(options.num_docs));
  for (int i = 0; i < options.num_docs; ++i)
    docs.push_back(builder.document());
  return docs;
}

void write_corpus(const std::filesystem::path& path,
                  const std::vector<std::string>& docs) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write corpus: " + path.string());
  for (const auto& doc : docs) os << doc << '\n';
  if (!os) throw std::runtime_error("corpus write failed");
}

std::vector<std::string> read_corpus(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open corpus: " + path.string());
  std::vector<std::string> docs;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) docs.push_back(line);
  }
  return docs;
}

}  // namespace wmeval
