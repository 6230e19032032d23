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
#include <optional>
#include <string>
#include <vector>

#include "wmeval/judger.hpp"

namespace wmeval {

// One constructed evaluation item. Word counts below always refer to
// whitespace-delimited words of the raw text, independent of any model
// vocabulary.
struct TaskItem {
  std::string id;  // stable content hash
  JudgeTask task = JudgeTask::completion;
  std::string prompt;
  std::string reference;
};

// Keeps answers longer than 230 words; from the last 230 words the first 30
// become the prompt and the remaining 200 the reference.
std::vector<TaskItem> build_completion(const std::vector<std::string>& answers);

// Keeps pairs whose question has exactly 10 words and ends with '?' and
// whose answer has fewer than 250 words. The question is the prompt,
// verbatim.
std::vector<TaskItem> build_qa(
    const std::vector<std::pair<std::string, std::string>>& pairs);

// Keeps (question, summary) pairs with questions of at most 60 words and
// summaries of at least 10; wraps the question in the summarization
// instruction prefix/suffix.
std::vector<TaskItem> build_summarization(
    const std::vector<std::pair<std::string, std::string>>& pairs);

extern const char* const kSummarizationPrefix;  // instruction before the text
extern const char* const kSummarizationSuffix;  // cue after the text

// JSONL I/O. Input lines carry {"question","answer"} or {"text"} or
// {"question","summary"} fields depending on the task; output lines are
// TaskItems with the field names above.
std::vector<TaskItem> load_task_items(const std::filesystem::path& path);
void save_task_items(const std::filesystem::path& path,
                     const std::vector<TaskItem>& items);

// Builds items of the given task from a dataset file. `limit` caps the
// output (0 = no cap) at the first qualifying items in file order, or at a
// seeded sample when shuffle_seed is set.
std::vector<TaskItem> build_tasks_from_file(
    const std::filesystem::path& input, JudgeTask task, int limit,
    std::optional<uint64_t> shuffle_seed);

}  // namespace wmeval
