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

#include "wmeval/judger.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "wmeval/hashing.hpp"

namespace wmeval {

std::string to_string(JudgeTask task) {
  switch (task) {
    case JudgeTask::completion: return "completion";
    case JudgeTask::qa: return "qa";
    case JudgeTask::summarization: return "summarization";
  }
  throw std::logic_error("unknown judge task");
}

JudgeTask judge_task_from_string(const std::string& s) {
  if (s == "completion") return JudgeTask::completion;
  if (s == "qa") return JudgeTask::qa;
  if (s == "summarization") return JudgeTask::summarization;
  throw std::invalid_argument("unknown judge task: " + s);
}

namespace {

struct TaskStrings {
  const char* output_name;
  const char* aspect2_label;
  const char* aspect2_text;
};

TaskStrings task_strings(JudgeTask task) {
  switch (task) {
    case JudgeTask::completion:
      return {"Completed Medical Text", "Relevance",
              "Whether the text includes relevant information for the "
              "prompt."};
    case JudgeTask::qa:
      return {"Medical Question Answer", "Relevance",
              "Whether the answer addresses the question without going "
              "off-topic and covering all essential parts."};
    case JudgeTask::summarization:
      return {"Summarized Medical Question", "Completeness",
              "Whether the generated summary misses any important "
              "information from the original text."};
  }
  throw std::logic_error("unknown judge task");
}

constexpr const char* kCoherenceText =
    "Whether the language is coherent, clear, and understandable.";
constexpr const char* kFactText =
    "Whether the generated text introduces inaccurate or unrelated medical "
    "terms not present in the original reference.";

}  // namespace

std::string build_prompt(const JudgeRequest& req) {
  if (req.answer_a.empty() || req.answer_b.empty())
    throw std::invalid_argument("both answers must be non-empty");
  const TaskStrings ts = task_strings(req.task);
  std::ostringstream os;
  os << "Please act as an impartial judge and evaluate the quality of the "
     << ts.output_name
     << " provided by two large language models to the prompt displayed "
        "below.\n\n"
     << "Assess each response according to the criteria outlined, using a "
        "1-5 Likert scale where 1 indicates strong disagreement or the "
        "lowest quality, and 5 indicates strong agreement or the highest "
        "quality.\n\n"
     << "Criteria:\n"
     << "1. Coherence. " << kCoherenceText << "\n"
     << "2. " << ts.aspect2_label << ". " << ts.aspect2_text << "\n"
     << "3. Factual Accuracy. " << kFactText << "\n\n"
     << "After scoring each criterion, provide a short summary for each "
        "response, including specific examples that influenced your "
        "scoring. Additionally, don't let the length of the responses "
        "influence your evaluation. Be as objective as possible and ensure "
        "that the order in which the responses are presented does not "
        "affect your decision.\n\n"
     << "Start with a brief statement about which response you think is "
        "superior. Then, for each response and criterion, provide a score, "
        "followed by a brief justification for that score. At the very end "
        "of your response, declare your verdict by choosing one of the "
        "choices below, strictly following the given format:\n\n"
     << "[[A]]: [list of scores for LLM A output, in order of Coherence, "
     << ts.aspect2_label << ", Factual Accuracy]\n"
     << "[[B]]: [list of scores for LLM B output, in order of Coherence, "
     << ts.aspect2_label << ", Factual Accuracy]\n\n"
     << "[Prompt]\n"
     << req.prompt_text << "\n\n"
     << "[LLM A's Answer]\n"
     << req.answer_a << "\n\n"
     << "[LLM B's Answer]\n"
     << req.answer_b << "\n";
  return os.str();
}

namespace {

std::array<int, 3> last_verdict_line(const std::string& response, char which,
                                     const std::string& full) {
  const std::string pattern =
      std::string(R"(\[\[)") + which +
      R"(\]\]\s*:\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\])";
  const std::regex re(pattern);
  auto begin = std::sregex_iterator(response.begin(), response.end(), re);
  auto end = std::sregex_iterator();
  if (begin == end)
    throw JudgeParseError(std::string("missing [[") + which + "]] verdict line",
                          full);
  std::smatch last;
  for (auto it = begin; it != end; ++it) last = *it;
  std::array<int, 3> scores{};
  for (int i = 0; i < 3; ++i) {
    const int v = std::stoi(last[static_cast<size_t>(i) + 1].str());
    if (v < 1 || v > 5)
      throw std::invalid_argument("verdict score outside 1-5: " +
                                  std::to_string(v));
    scores[static_cast<size_t>(i)] = v;
  }
  return scores;
}

}  // namespace

JudgeVerdict parse_verdict(const std::string& response) {
  JudgeVerdict v;
  v.scores_a = last_verdict_line(response, 'A', response);
  v.scores_b = last_verdict_line(response, 'B', response);
  v.raw_response = response;
  return v;
}

HttpTransport::HttpTransport(JudgerConfig config)
    : config_(std::move(config)) {}

std::string HttpTransport::complete(const std::string& prompt) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0')
    throw TransportError("missing API key in $" + config_.api_key_env);

  nlohmann::json body{
      {"model", config_.model},
      {"messages",
       nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};

  httplib::Client client(config_.endpoint);
  client.set_connection_timeout(config_.timeout_s);
  client.set_read_timeout(config_.timeout_s);
  client.set_bearer_token_auth(key);
  auto res = client.Post(config_.path, body.dump(), "application/json");
  if (!res)
    throw TransportError("connection failed: " +
                         httplib::to_string(res.error()));
  if (res->status != 200)
    throw TransportError("HTTP " + std::to_string(res->status) + ": " +
                         res->body);
  try {
    const auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content")
        .get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed completion response: ") +
                         e.what());
  }
}

JudgeCache::JudgeCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream is(path_);
  if (!is) return;  // fresh cache
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    entries_[j.at("key").get<std::string>()] =
        j.at("raw_response").get<std::string>();
  }
}

std::string JudgeCache::key_for(const std::string& prompt,
                                const std::string& model) {
  return to_hex64(fnv1a64(prompt + '\x1f' + model));
}

std::string JudgeCache::request_hash_for(const std::string& prompt) {
  return to_hex64(fnv1a64(prompt));
}

std::optional<std::string> JudgeCache::get(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void JudgeCache::put(const std::string& key, const std::string& raw_response,
                     const std::string& request_hash) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_[key] = raw_response;
  nlohmann::json j{{"key", key},
                   {"request_hash", request_hash.empty() ? key : request_hash},
                   {"raw_response", raw_response},
                   {"parsed", nullptr}};
  try {
    const JudgeVerdict v = parse_verdict(raw_response);
    j["parsed"] = {{"a", v.scores_a}, {"b", v.scores_b}};
  } catch (const std::exception&) {
    // Raw response kept; parsed stays null.
  }
  std::ofstream os(path_, std::ios::app);
  if (!os)
    throw std::runtime_error("cannot append to cache: " + path_.string());
  os << j.dump() << '\n';
}

namespace {

JudgeOutcome judge_one(const JudgeRequest& req, JudgeTransport& transport,
                       JudgeCache& cache, const std::string& model,
                       int attempts_allowed, int backoff_ms) {
  JudgeOutcome outcome;
  outcome.request_id = req.id;
  const std::string prompt = build_prompt(req);
  const std::string key = JudgeCache::key_for(prompt, model);

  std::string raw;
  bool have_raw = false;
  if (auto cached = cache.get(key)) {
    raw = *cached;
    have_raw = true;
    outcome.from_cache = true;
  } else {
    for (int attempt = 0; attempt < attempts_allowed; ++attempt) {
      try {
        raw = transport.complete(prompt);
        have_raw = true;
        break;
      } catch (const TransportError& e) {
        outcome.error = e.what();
        if (attempt + 1 < attempts_allowed && backoff_ms > 0)
          std::this_thread::sleep_for(
              std::chrono::milliseconds(backoff_ms << attempt));
      }
    }
  }

  if (have_raw) {
    try {
      JudgeVerdict verdict = parse_verdict(raw);
      if (req.swapped) std::swap(verdict.scores_a, verdict.scores_b);
      if (!outcome.from_cache)
        cache.put(key, raw, JudgeCache::request_hash_for(prompt));
      outcome.verdict = std::move(verdict);
      outcome.error.clear();
    } catch (const std::exception& e) {
      outcome.error = e.what();
    }
  }
  return outcome;
}

}  // namespace

std::vector<JudgeOutcome> judge_batch(const std::vector<JudgeRequest>& requests,
                                      JudgeTransport& transport,
                                      JudgeCache& cache,
                                      const std::string& model,
                                      int max_retries, int backoff_ms,
                                      int in_flight) {
  const int attempts_allowed = std::max(1, max_retries);
  std::vector<JudgeOutcome> outcomes(requests.size());
  if (in_flight <= 1 || requests.size() <= 1) {
    for (size_t i = 0; i < requests.size(); ++i)
      outcomes[i] = judge_one(requests[i], transport, cache, model,
                              attempts_allowed, backoff_ms);
    return outcomes;
  }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < requests.size();
         i = next.fetch_add(1)) {
      outcomes[i] = judge_one(requests[i], transport, cache, model,
                              attempts_allowed, backoff_ms);
    }
  };
  std::vector<std::thread> pool;
  const size_t threads =
      std::min<size_t>(static_cast<size_t>(in_flight), requests.size());
  pool.reserve(threads);
  for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return outcomes;
}

}  // namespace wmeval
