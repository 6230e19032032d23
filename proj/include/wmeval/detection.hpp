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

#include <stdexcept>
#include <string>

namespace wmeval {

enum class ScoreKind { z, ratio, logrank, curvature, align_pvalue };

std::string to_string(ScoreKind kind);
ScoreKind score_kind_from_string(const std::string& s);

// True when larger statistics indicate watermarked/model-generated text.
inline bool higher_is_positive(ScoreKind kind) {
  return kind == ScoreKind::z || kind == ScoreKind::ratio ||
         kind == ScoreKind::curvature;
}

// Per-text detection statistic plus the thresholded verdict.
struct DetectionScore {
  double statistic = 0.0;
  ScoreKind kind = ScoreKind::z;
  double threshold = 0.0;
  bool is_watermarked = false;
};

// Builds a DetectionScore with the verdict derived from the kind's
// favorable direction: strictly greater for z/ratio/curvature, strictly
// smaller for logrank (its threshold is calibrated as the strictest natural
// score), and at or below the threshold for align_pvalue.
inline DetectionScore make_detection_score(ScoreKind kind, double statistic,
                                           double threshold) {
  bool wm;
  if (higher_is_positive(kind))
    wm = statistic > threshold;
  else if (kind == ScoreKind::align_pvalue)
    wm = statistic <= threshold;
  else
    wm = statistic < threshold;
  return DetectionScore{statistic, kind, threshold, wm};
}

// Raised when a detector cannot score a text at all (e.g. SWEET with no
// position above the entropy gate). Distinct from "not watermarked".
struct UndetectableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wmeval
