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

#include "wmeval/records_io.hpp"

#include <fstream>
#include <sstream>

#include "wmeval/hashing.hpp"

namespace wmeval {

nlohmann::json to_json(const RunHeader& header) {
  nlohmann::json j{{"record", "header"},
                   {"version", header.version},
                   {"command", header.command},
                   {"params", header.params},
                   {"input_hashes", header.input_hashes}};
  if (header.created) j["created"] = *header.created;
  return j;
}

RunHeader run_header_from_json(const nlohmann::json& j) {
  RunHeader h;
  h.version = j.at("version").get<std::string>();
  h.command = j.at("command").get<std::string>();
  h.params = j.value("params", nlohmann::json::object());
  if (j.contains("input_hashes"))
    h.input_hashes =
        j.at("input_hashes").get<std::map<std::string, std::string>>();
  if (j.contains("created")) h.created = j.at("created").get<std::string>();
  return h;
}

std::string file_content_hash(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return to_hex64(fnv1a64(ss.str()));
}

nlohmann::json to_json(const GenRecord& rec) {
  nlohmann::json j{{"id", rec.id},
                   {"method", to_string(rec.method)},
                   {"params", rec.params},
                   {"prompt_ids", rec.prompt_ids.ids},
                   {"output_ids", rec.output_ids.ids},
                   {"entropies", rec.entropies}};
  if (rec.key_offset) j["key_offset"] = *rec.key_offset;
  return j;
}

GenRecord gen_record_from_json(const nlohmann::json& j) {
  GenRecord rec;
  rec.id = j.at("id").get<std::string>();
  rec.method = method_from_string(j.at("method").get<std::string>());
  rec.params = j.value("params", std::map<std::string, double>{});
  rec.prompt_ids.ids = j.at("prompt_ids").get<std::vector<TokenId>>();
  rec.output_ids.ids = j.at("output_ids").get<std::vector<TokenId>>();
  rec.entropies = j.at("entropies").get<std::vector<double>>();
  if (j.contains("key_offset") && !j.at("key_offset").is_null())
    rec.key_offset = j.at("key_offset").get<int64_t>();
  return rec;
}

nlohmann::json to_json(const ScoredRecord& rec) {
  nlohmann::json j{{"id", rec.id},
                   {"statistic", rec.score.statistic},
                   {"kind", to_string(rec.score.kind)},
                   {"threshold", rec.score.threshold},
                   {"is_watermarked", rec.score.is_watermarked}};
  for (const auto& [k, v] : rec.extra.items()) j[k] = v;
  if (!rec.error.empty()) j["error"] = rec.error;
  return j;
}

ScoredRecord scored_record_from_json(const nlohmann::json& j) {
  ScoredRecord rec;
  rec.id = j.at("id").get<std::string>();
  rec.error = j.value("error", std::string{});
  rec.score.statistic = j.at("statistic").get<double>();
  rec.score.kind = score_kind_from_string(j.at("kind").get<std::string>());
  rec.score.threshold = j.at("threshold").get<double>();
  rec.score.is_watermarked = j.at("is_watermarked").get<bool>();
  for (const auto& [k, v] : j.items()) {
    if (k != "id" && k != "statistic" && k != "kind" && k != "threshold" &&
        k != "is_watermarked" && k != "error")
      rec.extra[k] = v;
  }
  return rec;
}

namespace {

template <typename T>
void write_jsonl(const std::filesystem::path& path, const RunHeader& header,
                 const std::vector<T>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << to_json(header).dump() << '\n';
  for (const auto& rec : records) os << to_json(rec).dump() << '\n';
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

template <typename T, typename Parse>
std::vector<T> read_jsonl(const std::filesystem::path& path, Parse parse) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.contains("record") && j.at("record") == "header") continue;
    out.push_back(parse(j));
  }
  return out;
}

}  // namespace

void write_gen_records(const std::filesystem::path& path,
                       const RunHeader& header,
                       const std::vector<GenRecord>& records) {
  write_jsonl(path, header, records);
}

std::vector<GenRecord> read_gen_records(const std::filesystem::path& path) {
  return read_jsonl<GenRecord>(path, gen_record_from_json);
}

void write_scored_records(const std::filesystem::path& path,
                          const RunHeader& header,
                          const std::vector<ScoredRecord>& records) {
  write_jsonl(path, header, records);
}

std::vector<ScoredRecord> read_scored_records(
    const std::filesystem::path& path) {
  return read_jsonl<ScoredRecord>(path, scored_record_from_json);
}

}  // namespace wmeval
