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
#include <filesystem>
#include <string>
#include <vector>

namespace wmeval {

// Deterministic medical-flavored synthetic corpus: templated sentences with
// Zipf-weighted word pools, fixed collocations for low-entropy contexts,
// and the seed gazetteer's disease terms woven in. One document per string.
struct CorpusOptions {
  int num_docs = 3600;  // ~1.2 MB of text
  uint64_t seed = 20260810;
};

std::vector<std::string> make_corpus(const CorpusOptions& options);

// One document per line, UTF-8.
void write_corpus(const std::filesystem::path& path,
                  const std::vector<std::string>& docs);
std::vector<std::string> read_corpus(const std::filesystem::path& path);

// The disease terms the generator uses; mirrors data/gazetteer.txt.
const std::vector<std::string>& seed_disease_terms();

}  // namespace wmeval
