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

#include "wmeval/detection.hpp"

#include "wmeval/genrecord.hpp"

namespace wmeval {

std::string to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::z: return "z";
    case ScoreKind::ratio: return "ratio";
    case ScoreKind::logrank: return "logrank";
    case ScoreKind::curvature: return "curvature";
    case ScoreKind::align_pvalue: return "align_pvalue";
  }
  throw std::logic_error("unknown score kind");
}

ScoreKind score_kind_from_string(const std::string& s) {
  if (s == "z") return ScoreKind::z;
  if (s == "ratio") return ScoreKind::ratio;
  if (s == "logrank") return ScoreKind::logrank;
  if (s == "curvature") return ScoreKind::curvature;
  if (s == "align_pvalue") return ScoreKind::align_pvalue;
  throw std::invalid_argument("unknown score kind: " + s);
}

std::string to_string(WatermarkMethod m) {
  switch (m) {
    case WatermarkMethod::none: return "none";
    case WatermarkMethod::kgw: return "kgw";
    case WatermarkMethod::sweet: return "sweet";
    case WatermarkMethod::dipmark: return "dipmark";
    case WatermarkMethod::expedit: return "expedit";
  }
  throw std::logic_error("unknown watermark method");
}

WatermarkMethod method_from_string(const std::string& s) {
  if (s == "none") return WatermarkMethod::none;
  if (s == "kgw") return WatermarkMethod::kgw;
  if (s == "sweet") return WatermarkMethod::sweet;
  if (s == "dipmark") return WatermarkMethod::dipmark;
  if (s == "expedit") return WatermarkMethod::expedit;
  throw std::invalid_argument("unknown watermark method: " + s);
}

}  // namespace wmeval
