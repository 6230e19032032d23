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

#include "wmeval/tasks.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "wmeval/hashing.hpp"
#include "wmeval/splitmix.hpp"

namespace wmeval {

const char* const kSummarizationPrefix =
    "Write a short question that summarizes this question:";
const char* const kSummarizationSuffix = "Summarized Question:";

namespace {

std::vector<std::string> split_whitespace(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream is(text);
  std::string w;
  while (is >> w) words.push_back(w);
  return words;
}

std::string join_words(const std::vector<std::string>& words, size_t begin,
                       size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out += words[i];
  }
  return out;
}

std::string item_id(JudgeTask task, const std::string& prompt,
                    const std::string& reference) {
  return to_hex64(fnv1a64(to_string(task) + '\x1f' + prompt + '\x1f' +
                          reference));
}

}  // namespace

std::vector<TaskItem> build_completion(
    const std::vector<std::string>& answers) {
  std::vector<TaskItem> items;
  for (const auto& answer : answers) {
    const auto words = split_whitespace(answer);
    if (words.size() <= 230) continue;
    const size_t start = words.size() - 230;  // last 230 words
    TaskItem item;
    item.task = JudgeTask::completion;
    item.prompt = join_words(words, start, start + 30);
    item.reference = join_words(words, start + 30, words.size());
    item.id = item_id(item.task, item.prompt, item.reference);
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<TaskItem> build_qa(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<TaskItem> items;
  for (const auto& [question, answer] : pairs) {
    const auto qwords = split_whitespace(question);
    if (qwords.size() != 10) continue;
    if (qwords.back().empty() || qwords.back().back() != '?') continue;
    if (split_whitespace(answer).size() >= 250) continue;
    TaskItem item;
    item.task = JudgeTask::qa;
    item.prompt = join_words(qwords, 0, qwords.size());
    item.reference = answer;
    item.id = item_id(item.task, item.prompt, item.reference);
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<TaskItem> build_summarization(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<TaskItem> items;
  for (const auto& [question, summary] : pairs) {
    if (split_whitespace(question).size() > 60) continue;
    if (split_whitespace(summary).size() < 10) continue;
    TaskItem item;
    item.task = JudgeTask::summarization;
    item.prompt = std::string(kSummarizationPrefix) + ' ' + question + ' ' +
                  kSummarizationSuffix;
    item.reference = summary;
    item.id = item_id(item.task, item.prompt, item.reference);
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<TaskItem> load_task_items(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open tasks: " + path.string());
  std::vector<TaskItem> items;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.contains("record")) continue;  // file header
    TaskItem item;
    item.id = j.at("id").get<std::string>();
    item.task = judge_task_from_string(j.at("task").get<std::string>());
    item.prompt = j.at("prompt").get<std::string>();
    item.reference = j.at("reference").get<std::string>();
    items.push_back(std::move(item));
  }
  return items;
}

void save_task_items(const std::filesystem::path& path,
                     const std::vector<TaskItem>& items) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write tasks: " + path.string());
  for (const auto& item : items) {
    nlohmann::json j{{"id", item.id},
                     {"task", to_string(item.task)},
                     {"prompt", item.prompt},
                     {"reference", item.reference}};
    os << j.dump() << '\n';
  }
}

std::vector<TaskItem> build_tasks_from_file(
    const std::filesystem::path& input, JudgeTask task, int limit,
    std::optional<uint64_t> shuffle_seed) {
  std::ifstream is(input);
  if (!is) throw std::runtime_error("cannot open dataset: " + input.string());

  std::vector<std::string> texts;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    switch (task) {
      case JudgeTask::completion:
        if (j.contains("text"))
          texts.push_back(j.at("text").get<std::string>());
        else
          texts.push_back(j.at("answer").get<std::string>());
        break;
      case JudgeTask::qa:
        pairs.emplace_back(j.at("question").get<std::string>(),
                           j.at("answer").get<std::string>());
        break;
      case JudgeTask::summarization:
        pairs.emplace_back(j.at("question").get<std::string>(),
                           j.at("summary").get<std::string>());
        break;
    }
  }

  std::vector<TaskItem> items;
  switch (task) {
    case JudgeTask::completion: items = build_completion(texts); break;
    case JudgeTask::qa: items = build_qa(pairs); break;
    case JudgeTask::summarization: items = build_summarization(pairs); break;
  }

  if (shuffle_seed) {
    SplitMix64 rng(*shuffle_seed);
    for (size_t i = items.size(); i > 1; --i)
      std::swap(items[i - 1], items[rng.next_below(i)]);
  }
  if (limit > 0 && static_cast<int>(items.size()) > limit)
    items.resize(static_cast<size_t>(limit));
  return items;
}

}  // namespace wmeval
