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

#include "wmeval/fws.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wmeval/stats.hpp"

namespace wmeval {

FwsConfig FwsConfig::normalized(double a, double b) {
  if (a < 0.0 || b < 0.0)
    throw std::invalid_argument("weights must be non-negative");
  const double s = 2.0 * a + b;
  if (!(s > 0.0)) throw std::invalid_argument("weights must have mass");
  return FwsConfig{a / s, b / s};
}

double fws(const AspectScores& scores, const FwsConfig& config) {
  return config.alpha * (scores.relevance + scores.factual_accuracy) +
         config.beta * scores.coherence;
}

double normalize_likert(double raw, double scale_min, double scale_max) {
  if (!(scale_max > scale_min))
    throw std::invalid_argument("scale_max must exceed scale_min");
  if (raw < scale_min || raw > scale_max)
    throw std::invalid_argument("raw value outside the scale");
  return (raw - scale_min) / (scale_max - scale_min);
}

std::vector<FwsConfig> default_sweep_configs() {
  return {FwsConfig::normalized(0.25, 0.5), FwsConfig::normalized(0.33, 0.33),
          FwsConfig::normalized(0.4, 0.2), FwsConfig::normalized(0.44, 0.11),
          FwsConfig::normalized(0.46, 0.08)};
}

std::vector<SweepRow> sensitivity_sweep(std::span<const AspectScores> scores,
                                        std::span<const double> human,
                                        std::span<const FwsConfig> configs) {
  if (scores.size() != human.size())
    throw std::invalid_argument("scores/human length mismatch");
  if (scores.size() < 3)
    throw std::invalid_argument("need at least 3 aligned items");
  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  std::vector<double> values(scores.size());
  for (const auto& config : configs) {
    for (size_t i = 0; i < scores.size(); ++i)
      values[i] = fws(scores[i], config);
    SweepRow row;
    row.config = config;
    try {
      row.pearson_r = pearson(values, human);
    } catch (const UndefinedCorrelationError&) {
      row.pearson_r = std::numeric_limits<double>::quiet_NaN();
      row.defined = false;
    }
    rows.push_back(row);
  }
  return rows;
}

AspectScores auto_aspects(double perplexity, double similarity,
                          double hallucination_rate) {
  auto clip = [](double v) { return std::clamp(v, 0.0, 1.0); };
  AspectScores s;
  s.coherence = clip(1.0 / (1.0 + std::log(std::max(1.0, perplexity))));
  s.relevance = clip((similarity + 1.0) / 2.0);
  s.factual_accuracy = clip(1.0 - hallucination_rate);
  return s;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

std::vector<HumanRating> load_human_ratings_csv(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open ratings file: " + path.string());
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("empty ratings file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "item_id,rater_id,coherence,relevance,factual_accuracy")
    throw std::runtime_error("unexpected ratings header: " + line);

  std::vector<HumanRating> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw std::runtime_error("ratings line " + std::to_string(line_no) +
                               ": expected 5 fields");
    HumanRating r;
    r.item_id = fields[0];
    r.rater_id = fields[1];
    r.coherence = std::stod(fields[2]);
    r.relevance = std::stod(fields[3]);
    r.factual_accuracy = std::stod(fields[4]);
    for (double v : {r.coherence, r.relevance, r.factual_accuracy}) {
      if (v < 1.0 || v > 5.0)
        throw std::runtime_error("ratings line " + std::to_string(line_no) +
                                 ": score outside 1-5");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AggregatedRating> aggregate_ratings(
    const std::vector<HumanRating>& ratings) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<AspectScores, int>> acc;
  for (const auto& r : ratings) {
    auto it = acc.find(r.item_id);
    if (it == acc.end()) {
      order.push_back(r.item_id);
      it = acc.emplace(r.item_id, std::make_pair(AspectScores{}, 0)).first;
    }
    it->second.first.coherence += r.coherence;
    it->second.first.relevance += r.relevance;
    it->second.first.factual_accuracy += r.factual_accuracy;
    ++it->second.second;
  }
  std::vector<AggregatedRating> out;
  out.reserve(order.size());
  for (const auto& id : order) {
    const auto& [sum, count] = acc.at(id);
    AggregatedRating agg;
    agg.item_id = id;
    agg.rater_count = count;
    agg.normalized.coherence = normalize_likert(sum.coherence / count, 1, 5);
    agg.normalized.relevance = normalize_likert(sum.relevance / count, 1, 5);
    agg.normalized.factual_accuracy =
        normalize_likert(sum.factual_accuracy / count, 1, 5);
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace wmeval
