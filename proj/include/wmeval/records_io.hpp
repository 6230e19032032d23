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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wmeval/detection.hpp"
#include "wmeval/genrecord.hpp"

namespace wmeval {

// First line of every output file: run metadata. The "record":"header"
// marker distinguishes it from data lines; readers skip it. `created` is
// omitted under --deterministic so reruns are byte-identical.
struct RunHeader {
  std::string version = "0.1.0";
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::map<std::string, std::string> input_hashes;
  std::optional<std::string> created;
};

nlohmann::json to_json(const RunHeader& header);
RunHeader run_header_from_json(const nlohmann::json& j);

// 16-hex-digit content hash of a file, for header provenance.
std::string file_content_hash(const std::filesystem::path& path);

nlohmann::json to_json(const GenRecord& rec);
GenRecord gen_record_from_json(const nlohmann::json& j);

// A detection line: the DetectionScore fields plus the record id it scored
// and optional per-method extras (DiPmark's phi, degeneracy flags).
struct ScoredRecord {
  std::string id;
  DetectionScore score;
  nlohmann::json extra = nlohmann::json::object();
  std::string error;  // non-empty when the item could not be scored
};

nlohmann::json to_json(const ScoredRecord& rec);
ScoredRecord scored_record_from_json(const nlohmann::json& j);

// JSONL helpers. Writers emit the header first; readers skip header lines.
void write_gen_records(const std::filesystem::path& path,
                       const RunHeader& header,
                       const std::vector<GenRecord>& records);
std::vector<GenRecord> read_gen_records(const std::filesystem::path& path);

void write_scored_records(const std::filesystem::path& path,
                          const RunHeader& header,
                          const std::vector<ScoredRecord>& records);
std::vector<ScoredRecord> read_scored_records(
    const std::filesystem::path& path);

}  // namespace wmeval
