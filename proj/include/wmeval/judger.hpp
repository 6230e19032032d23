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

#include <array>
#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmeval {

enum class JudgeTask { completion, qa, summarization };

std::string to_string(JudgeTask task);
JudgeTask judge_task_from_string(const std::string& s);

// Pairwise judging request. `swapped` records the upstream A/B
// randomization: when true, answer_a holds the unwatermarked text and the
// parsed scores are swapped back so downstream order is always
// (watermarked, unwatermarked).
struct JudgeRequest {
  std::string id;
  JudgeTask task = JudgeTask::qa;
  std::string prompt_text;
  std::string answer_a;
  std::string answer_b;
  bool swapped = false;
};

// Six 1-5 integers parsed from the verdict lines, plus the raw response.
struct JudgeVerdict {
  std::array<int, 3> scores_a{};  // coherence, relevance/completeness, fact
  std::array<int, 3> scores_b{};
  std::string raw_response;
};

struct JudgeParseError : std::runtime_error {
  explicit JudgeParseError(const std::string& what, std::string response)
      : std::runtime_error(what), raw_response(std::move(response)) {}
  std::string raw_response;
};

// Renders the pairwise judging prompt: impartial-judge preamble, the 1-5
// Likert instruction, the three task-specific criteria, formatting
// instructions, the bracketed verdict contract, and the [Prompt] /
// [LLM A's Answer] / [LLM B's Answer] sections.
std::string build_prompt(const JudgeRequest& req);

// Extracts the final "[[A]]: [i, j, k]" and "[[B]]: [i, j, k]" lines.
// Whitespace tolerant. Throws JudgeParseError when either line is missing
// and std::invalid_argument when a score is outside 1-5.
JudgeVerdict parse_verdict(const std::string& response);

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Chat-completion transport: takes the user prompt, returns the assistant
// message content.
class JudgeTransport {
 public:
  virtual ~JudgeTransport() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

// Offline transport for tests and --mock runs. The responder must be
// thread-safe when the batch runs with an in-flight limit above 1.
class MockTransport : public JudgeTransport {
 public:
  using Responder = std::function<std::string(const std::string& prompt)>;

  explicit MockTransport(Responder responder)
      : responder_(std::move(responder)) {}

  std::string complete(const std::string& prompt) override {
    ++calls_;
    return responder_(prompt);
  }

  int calls() const { return calls_; }

 private:
  Responder responder_;
  std::atomic<int> calls_{0};
};

struct JudgerConfig {
  std::string endpoint = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o-2024-08-06";
  std::string api_key_env = "JUDGER_API_KEY";
  int max_retries = 3;
  int backoff_ms = 250;  // doubled per retry
  int timeout_s = 60;
};

// HTTPS chat-completion client (JSON body, bearer token from the
// environment variable named in the config).
class HttpTransport : public JudgeTransport {
 public:
  explicit HttpTransport(JudgerConfig config);
  std::string complete(const std::string& prompt) override;

 private:
  JudgerConfig config_;
};

// Append-only JSONL cache keyed by content hash of (prompt, model); reruns
// are idempotent and resume where they stopped. Reads and writes are
// serialized internally.
class JudgeCache {
 public:
  explicit JudgeCache(std::filesystem::path path);

  static std::string key_for(const std::string& prompt,
                             const std::string& model);
  static std::string request_hash_for(const std::string& prompt);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& raw_response,
           const std::string& request_hash = "");
  size_t size() const { return entries_.size(); }

 private:
  std::filesystem::path path_;
  std::map<std::string, std::string> entries_;
  mutable std::mutex mutex_;
};

struct JudgeOutcome {
  std::string request_id;
  std::optional<JudgeVerdict> verdict;  // empty on item-level failure
  std::string error;                    // failure reason when empty verdict
  bool from_cache = false;
};

// Runs the batch with at-most-once transport semantics per cache key and
// exponential backoff on TransportError. Item failures are recorded and the
// batch continues; results are ordered by request index regardless of
// completion order. Parsed scores are un-swapped per request.swapped.
// `in_flight` > 1 dispatches that many items concurrently; the transport
// must then be safe for concurrent complete() calls.
std::vector<JudgeOutcome> judge_batch(const std::vector<JudgeRequest>& requests,
                                      JudgeTransport& transport,
                                      JudgeCache& cache,
                                      const std::string& model,
                                      int max_retries, int backoff_ms = 0,
                                      int in_flight = 1);

}  // namespace wmeval
