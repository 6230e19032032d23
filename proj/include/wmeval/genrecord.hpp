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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wmeval/vocab.hpp"

namespace wmeval {

enum class WatermarkMethod { none, kgw, sweet, dipmark, expedit };

std::string to_string(WatermarkMethod m);
WatermarkMethod method_from_string(const std::string& s);

// One generation run: prompt, sampled output, the pre-hook entropy of every
// step's model distribution, and the exact parameters used.
struct GenRecord {
  std::string id;
  WatermarkMethod method = WatermarkMethod::none;
  std::map<std::string, double> params;
  TokenSeq prompt_ids;
  TokenSeq output_ids;
  std::vector<double> entropies;        // one per output token
  std::optional<int64_t> key_offset;    // EXP-edit cyclic start offset
};

}  // namespace wmeval
