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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wmeval/corpus.hpp"
#include "wmeval/dipmark.hpp"
#include "wmeval/expedit.hpp"
#include "wmeval/factuality.hpp"
#include "wmeval/fws.hpp"
#include "wmeval/greenlist.hpp"
#include "wmeval/judger.hpp"
#include "wmeval/metrics.hpp"
#include "wmeval/posthoc.hpp"
#include "wmeval/records_io.hpp"
#include "wmeval/similarity.hpp"
#include "wmeval/stats.hpp"
#include "wmeval/tasks.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wmeval;

namespace {

// Exit codes: 0 success, 1 internal failure, 2 usage/configuration error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const fs::path& path, const std::string& what) {
  if (!fs::exists(path))
    throw UsageError("missing " + what + ": " + path.string());
}

bool g_deterministic = false;

std::optional<std::string> now_iso8601() {
  if (g_deterministic) return std::nullopt;
  const auto t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

RunHeader make_header(const std::string& command, json params,
                      std::map<std::string, std::string> input_hashes) {
  RunHeader h;
  h.command = command;
  h.params = std::move(params);
  h.input_hashes = std::move(input_hashes);
  h.created = now_iso8601();
  return h;
}

// CSV outputs carry the run header as a leading comment line.
std::string csv_header_comment(const RunHeader& header) {
  std::string line = "# wmeval " + header.command + " version=" +
                     header.version + " params=" + header.params.dump();
  if (header.created) line += " created=" + *header.created;
  return line;
}

// Deterministic fan-out: seeds are pre-drawn, outputs keep input order.
template <typename Fn>
void parallel_for(int n, int jobs, Fn fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::future<void>> futures;
  const int threads = std::min(jobs, n);
  futures.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t)
    futures.push_back(std::async(std::launch::async, worker));
  for (auto& f : futures) f.get();
}

std::map<std::string, TaskItem> tasks_by_id(const std::vector<TaskItem>& v) {
  std::map<std::string, TaskItem> out;
  for (const auto& item : v) out[item.id] = item;
  return out;
}

// ------------------------------------------------------------------
// make-corpus

struct MakeCorpusOpts {
  std::string out;
  int docs = 3600;
  uint64_t seed = 20260810;
};

int run_make_corpus(const MakeCorpusOpts& opt) {
  const auto docs = make_corpus({opt.docs, opt.seed});
  write_corpus(opt.out, docs);
  std::cout << "wrote " << docs.size() << " documents, "
            << fs::file_size(opt.out) << " bytes to " << opt.out << "\n";
  return 0;
}

// ------------------------------------------------------------------
// tasks

struct TasksOpts {
  std::string input;
  std::string task = "qa";
  std::string out;
  int limit = 200;
  int64_t shuffle_seed = -1;
};

int run_tasks(const TasksOpts& opt) {
  require_file(opt.input, "dataset file");
  const JudgeTask task = judge_task_from_string(opt.task);
  std::optional<uint64_t> shuffle;
  if (opt.shuffle_seed >= 0)
    shuffle = static_cast<uint64_t>(opt.shuffle_seed);
  const auto items = build_tasks_from_file(opt.input, task, opt.limit, shuffle);

  std::ofstream os(opt.out);
  if (!os) throw std::runtime_error("cannot write " + opt.out);
  json params{{"task", opt.task}, {"limit", opt.limit}};
  if (shuffle) params["shuffle_seed"] = *shuffle;
  os << to_json(make_header("tasks", params,
                            {{"input", file_content_hash(opt.input)}}))
            .dump()
     << '\n';
  for (const auto& item : items) {
    os << json{{"id", item.id},
               {"task", to_string(item.task)},
               {"prompt", item.prompt},
               {"reference", item.reference}}
              .dump()
       << '\n';
  }
  std::cout << "kept " << items.size() << " task items -> " << opt.out << "\n";
  return 0;
}

// ------------------------------------------------------------------
// train-lm

struct TrainOpts {
  std::string corpus;
  int order = 3;
  double k = 0.01;
  std::string out;
  double holdout = 0.05;
};

int run_train_lm(const TrainOpts& opt) {
  require_file(opt.corpus, "corpus file");
  const auto docs = read_corpus(opt.corpus);
  if (docs.empty()) throw UsageError("corpus has no documents");
  const auto n_holdout = static_cast<size_t>(
      std::min<double>(static_cast<double>(docs.size()) - 1.0,
                       opt.holdout * static_cast<double>(docs.size())));
  const std::vector<std::string> train_docs(docs.begin(),
                                            docs.end() - n_holdout);
  const auto model = NgramModel::train(train_docs, opt.order, opt.k);
  model.save(opt.out);

  double ppl_sum = 0.0;
  int ppl_n = 0;
  for (size_t i = docs.size() - n_holdout; i < docs.size(); ++i) {
    const TokenSeq seq = tokenize(docs[i], model.vocab());
    if (seq.size() < 2) continue;
    ppl_sum += model.perplexity(seq);
    ++ppl_n;
  }
  std::cout << "vocab size: " << model.vocab().size() << "\n";
  if (ppl_n > 0)
    std::cout << "held-out perplexity (" << ppl_n
              << " docs): " << ppl_sum / ppl_n << "\n";
  std::cout << "model -> " << opt.out << "\n";
  return 0;
}

// ------------------------------------------------------------------
// generate

struct GenerateOpts {
  std::string model;
  std::string tasks;
  std::string method = "none";
  uint64_t key = 0;
  bool key_set = false;
  uint64_t seed = 1;
  int max_tokens = 200;
  std::string out;
  double gamma = 0.5;
  double delta = 2.0;
  double entropy_threshold = 0.9;
  double alpha = 0.45;
  int pseudo_length = 256;
  int jobs = 1;
};

GenRecord generate_one(const NgramModel& model, const TaskItem& item,
                       WatermarkMethod method, const GenerateOpts& opt,
                       uint64_t item_seed) {
  const TokenSeq prompt = tokenize(item.prompt, model.vocab());
  GenRecord rec;
  switch (method) {
    case WatermarkMethod::none:
      rec = generate(model, prompt, opt.max_tokens, GenHook{}, item_seed);
      break;
    case WatermarkMethod::kgw:
      rec = generate(model, prompt, opt.max_tokens,
                     kgw_hook(WatermarkKey{opt.key}, {opt.gamma, opt.delta}),
                     item_seed);
      rec.params = {{"gamma", opt.gamma}, {"delta", opt.delta}};
      break;
    case WatermarkMethod::sweet:
      rec = generate(
          model, prompt, opt.max_tokens,
          sweet_hook(WatermarkKey{opt.key},
                     {opt.gamma, opt.delta, opt.entropy_threshold}),
          item_seed);
      rec.params = {{"gamma", opt.gamma},
                    {"delta", opt.delta},
                    {"entropy_threshold", opt.entropy_threshold}};
      break;
    case WatermarkMethod::dipmark:
      rec = generate(model, prompt, opt.max_tokens,
                     dipmark_hook(WatermarkKey{opt.key}, {opt.alpha, opt.gamma}),
                     item_seed);
      rec.params = {{"alpha", opt.alpha}, {"gamma", opt.gamma}};
      break;
    case WatermarkMethod::expedit: {
      const ExpKey expkey{WatermarkKey{opt.key}, opt.pseudo_length,
                          model.vocab().size()};
      rec = exp_generate(model, prompt, opt.max_tokens, expkey, item_seed);
      break;
    }
  }
  rec.id = item.id;
  rec.method = method;
  return rec;
}

int run_generate(const GenerateOpts& opt) {
  require_file(opt.model, "model file");
  require_file(opt.tasks, "tasks file");
  const WatermarkMethod method = method_from_string(opt.method);
  if (method != WatermarkMethod::none && !opt.key_set)
    throw UsageError("--key is required for method " + opt.method);

  const auto model = NgramModel::load(opt.model);
  const auto items = load_task_items(opt.tasks);
  if (items.empty()) throw UsageError("tasks file has no items");

  // Per-item seeds drawn up front so --jobs does not change outputs.
  SplitMix64 seed_stream(opt.seed);
  std::vector<uint64_t> seeds(items.size());
  for (auto& s : seeds) s = seed_stream.next();

  std::vector<GenRecord> records(items.size());
  parallel_for(static_cast<int>(items.size()), opt.jobs, [&](int i) {
    records[static_cast<size_t>(i)] =
        generate_one(model, items[static_cast<size_t>(i)], method, opt,
                     seeds[static_cast<size_t>(i)]);
  });
  std::stable_sort(records.begin(), records.end(),
            [](const GenRecord& a, const GenRecord& b) { return a.id < b.id; });

  json params{{"method", opt.method},  {"seed", opt.seed},
              {"max_tokens", opt.max_tokens}, {"gamma", opt.gamma},
              {"delta", opt.delta},    {"entropy_threshold",
                                        opt.entropy_threshold},
              {"alpha", opt.alpha},    {"pseudo_length", opt.pseudo_length}};
  write_gen_records(opt.out,
                    make_header("generate", params,
                                {{"model", file_content_hash(opt.model)},
                                 {"tasks", file_content_hash(opt.tasks)}}),
                    records);
  std::cout << "generated " << records.size() << " records -> " << opt.out
            << "\n";
  return 0;
}

// ------------------------------------------------------------------
// detect

struct DetectOpts {
  std::string model;
  std::string method = "kgw";
  uint64_t key = 0;
  bool key_set = false;
  std::string input;      // GenRecord JSONL
  std::string text_file;  // plain text, one document per line
  std::string out;
  double z_threshold = kDefaultZThreshold;
  double p_threshold = 0.01;
  double gamma = 0.5;
  double entropy_threshold = 0.9;
  std::string entropy_source = "recorded";  // or "model"
  int pseudo_length = 256;
  int permutations = 100;
  uint64_t resample_seed = 7;
  int block_len = 0;
  double gamma_edit = 0.0;
  double logrank_threshold = 0.0;
  bool logrank_threshold_set = false;
  std::string naturals;  // calibration sample for logrank
  int num_perturbations = 20;
  double perturb_fraction = 0.15;
  double curvature_threshold = 2.0;
  uint64_t detect_seed = 11;
  int jobs = 1;
};

struct DetectItem {
  std::string id;
  TokenSeq text;
  std::vector<double> recorded_entropies;  // empty when absent
};

int run_detect(const DetectOpts& opt) {
  require_file(opt.model, "model file");
  const bool needs_key = opt.method == "kgw" || opt.method == "sweet" ||
                         opt.method == "dipmark" || opt.method == "expedit";
  if (needs_key && !opt.key_set)
    throw UsageError("--key is required for method " + opt.method);
  if (opt.input.empty() == opt.text_file.empty())
    throw UsageError("exactly one of --input / --text-file is required");

  const auto model = NgramModel::load(opt.model);
  const int vocab_size = model.vocab().size();

  std::vector<DetectItem> items;
  std::map<std::string, std::string> input_hashes;
  input_hashes["model"] = file_content_hash(opt.model);
  if (!opt.input.empty()) {
    require_file(opt.input, "generation records");
    input_hashes["input"] = file_content_hash(opt.input);
    for (const auto& rec : read_gen_records(opt.input))
      items.push_back({rec.id, rec.output_ids, rec.entropies});
  } else {
    require_file(opt.text_file, "text file");
    input_hashes["text_file"] = file_content_hash(opt.text_file);
    int line_no = 0;
    for (const auto& line : read_corpus(opt.text_file))
      items.push_back(
          {"line-" + std::to_string(line_no++), tokenize(line, model.vocab()),
           {}});
  }

  // LogRank threshold: explicit flag or strictest-natural calibration.
  double logrank_thr = opt.logrank_threshold;
  if (opt.method == "logrank" && !opt.logrank_threshold_set) {
    if (opt.naturals.empty())
      throw UsageError(
          "logrank needs --logrank-threshold or --naturals for calibration");
    require_file(opt.naturals, "calibration text");
    std::vector<TokenSeq> sample;
    for (const auto& line : read_corpus(opt.naturals)) {
      const TokenSeq seq = tokenize(line, model.vocab());
      if (seq.size() >= 2) sample.push_back(seq);
    }
    logrank_thr = calibrate_logrank_threshold(sample, model);
    input_hashes["naturals"] = file_content_hash(opt.naturals);
  }

  std::vector<ScoredRecord> scored(items.size());
  parallel_for(static_cast<int>(items.size()), opt.jobs, [&](int idx) {
    const auto& item = items[static_cast<size_t>(idx)];
    ScoredRecord rec;
    rec.id = item.id;
    try {
      if (opt.method == "kgw") {
        rec.score = kgw_detect(item.text, WatermarkKey{opt.key}, opt.gamma,
                               opt.z_threshold, vocab_size);
      } else if (opt.method == "sweet") {
        std::vector<double> entropies = item.recorded_entropies;
        if (opt.entropy_source == "model" || entropies.empty())
          entropies = recompute_entropies(model, item.text);
        rec.score = sweet_detect(
            item.text, entropies, WatermarkKey{opt.key},
            {opt.gamma, 0.0, opt.entropy_threshold}, opt.z_threshold,
            vocab_size);
      } else if (opt.method == "dipmark") {
        const DipDetection det =
            dip_detect(item.text, WatermarkKey{opt.key}, opt.gamma,
                       opt.z_threshold, vocab_size);
        rec.score = det.score;
        rec.extra["phi"] = det.phi;
      } else if (opt.method == "expedit") {
        AlignParams params;
        params.gamma_edit = opt.gamma_edit;
        params.block_len = opt.block_len;
        params.num_permutations = opt.permutations;
        params.p_threshold = opt.p_threshold;
        params.resample_seed =
            opt.resample_seed + static_cast<uint64_t>(idx);
        const ExpKey expkey{WatermarkKey{opt.key}, opt.pseudo_length,
                            vocab_size};
        rec.score = exp_detect(item.text, expkey, params, 1);
      } else if (opt.method == "logrank") {
        rec.score = logrank_detect(item.text, model, logrank_thr);
      } else if (opt.method == "detectgpt") {
        DetectGptParams params;
        params.num_perturbations = opt.num_perturbations;
        params.perturb_fraction = opt.perturb_fraction;
        const DetectGptResult r = detectgpt_score(
            item.text, model, params,
            opt.detect_seed + static_cast<uint64_t>(idx));
        rec.score = make_detection_score(ScoreKind::curvature, r.score,
                                         opt.curvature_threshold);
        rec.extra["degenerate"] = r.degenerate;
      } else {
        throw UsageError("unknown detection method: " + opt.method);
      }
    } catch (const UndetectableError& e) {
      rec.error = e.what();
      rec.score = DetectionScore{0.0, ScoreKind::z, opt.z_threshold, false};
    } catch (const std::invalid_argument& e) {
      // Item-level defects (e.g. a text too short to score) are recorded
      // and the batch continues.
      rec.error = e.what();
      rec.score = DetectionScore{0.0, ScoreKind::z, opt.z_threshold, false};
    }
    scored[static_cast<size_t>(idx)] = std::move(rec);
  });
  std::stable_sort(scored.begin(), scored.end(),
            [](const ScoredRecord& a, const ScoredRecord& b) {
              return a.id < b.id;
            });

  json params{{"method", opt.method},
              {"z_threshold", opt.z_threshold},
              {"p_threshold", opt.p_threshold},
              {"gamma", opt.gamma},
              {"entropy_threshold", opt.entropy_threshold},
              {"entropy_source", opt.entropy_source},
              {"pseudo_length", opt.pseudo_length},
              {"permutations", opt.permutations},
              {"resample_seed", opt.resample_seed}};
  if (opt.method == "logrank") params["logrank_threshold"] = logrank_thr;
  write_scored_records(opt.out, make_header("detect", params, input_hashes),
                       scored);

  int flagged = 0;
  for (const auto& rec : scored) flagged += rec.score.is_watermarked;
  std::cout << "scored " << scored.size() << " items, " << flagged
            << " flagged -> " << opt.out << "\n";
  return 0;
}

// ------------------------------------------------------------------
// evaluate

struct EvalEntry {
  std::string method;
  std::string gen;
  std::string pos;  // detection scores of the watermarked file
  std::string neg;  // detection scores of the baseline under same detector
};

struct EvaluateOpts {
  std::string tasks;
  std::string model;
  std::string out;
  std::string metrics = "tpr,auroc,ppl,similarity,rouge2,rougel,f1";
  std::string manifest;
  EvalEntry single;
  std::string embeddings;
};

ScorePair score_pair_from_files(const std::string& pos_file,
                                const std::string& neg_file) {
  const auto pos = read_scored_records(pos_file);
  const auto neg = read_scored_records(neg_file);
  ScorePair pair;
  std::optional<ScoreKind> kind;
  for (const auto& r : pos) {
    if (!r.error.empty()) continue;
    pair.positives.push_back(r.score.statistic);
    kind = r.score.kind;
  }
  for (const auto& r : neg) {
    if (!r.error.empty()) continue;
    pair.negatives.push_back(r.score.statistic);
  }
  if (!kind) throw std::runtime_error("no scorable items in " + pos_file);
  pair.direction = higher_is_positive(*kind)
                       ? ScoreDirection::higher_is_positive
                       : ScoreDirection::lower_is_positive;
  return pair;
}

int run_evaluate(const EvaluateOpts& opt) {
  require_file(opt.tasks, "tasks file");
  require_file(opt.model, "model file");
  if (opt.metrics.empty()) throw UsageError("empty metric list");

  std::vector<std::string> metrics;
  {
    std::stringstream ss(opt.metrics);
    std::string m;
    while (std::getline(ss, m, ',')) {
      static const std::vector<std::string> known = {
          "tpr", "auroc", "ppl", "similarity", "rouge2", "rougel", "f1"};
      if (std::find(known.begin(), known.end(), m) == known.end())
        throw UsageError("unknown metric: " + m);
      metrics.push_back(m);
    }
    if (metrics.empty()) throw UsageError("empty metric list");
  }
  auto wants = [&metrics](const std::string& m) {
    return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
  };

  std::vector<EvalEntry> entries;
  if (!opt.manifest.empty()) {
    require_file(opt.manifest, "manifest");
    std::ifstream is(opt.manifest);
    const json m = json::parse(is);
    for (const auto& e : m.at("entries")) {
      entries.push_back({e.at("method").get<std::string>(),
                         e.value("gen", std::string{}),
                         e.value("scores_pos", std::string{}),
                         e.value("scores_neg", std::string{})});
    }
  } else {
    if (opt.single.method.empty())
      throw UsageError("provide --manifest or --method/--gen/--pos/--neg");
    entries.push_back(opt.single);
  }

  const auto model = NgramModel::load(opt.model);
  const auto items = tasks_by_id(load_task_items(opt.tasks));

  // Reference-based metrics use the offline TF-IDF provider fit on the
  // task references, optionally fronted by an embedding file.
  std::vector<std::string> references;
  for (const auto& [id, item] : items) references.push_back(item.reference);
  auto tfidf = std::make_shared<TfidfProvider>(TfidfProvider::fit(references));
  std::shared_ptr<const SimilarityProvider> provider = tfidf;
  std::shared_ptr<FileEmbeddingProvider> file_provider;
  if (!opt.embeddings.empty()) {
    require_file(opt.embeddings, "embedding file");
    file_provider =
        std::make_shared<FileEmbeddingProvider>(opt.embeddings, tfidf);
    provider = file_provider;
  }

  json report{{"methods", json::object()}};
  std::vector<std::vector<std::string>> table;
  table.push_back({"method"});
  for (const auto& m : metrics) table.back().push_back(m);

  for (const auto& entry : entries) {
    json cell = json::object();
    if ((wants("tpr") || wants("auroc")) &&
        (!entry.pos.empty() && !entry.neg.empty())) {
      require_file(entry.pos, "scores");
      require_file(entry.neg, "scores");
      const ScorePair pair = score_pair_from_files(entry.pos, entry.neg);
      if (wants("tpr")) cell["tpr_at_fpr0"] = tpr_at_fpr0(pair);
      if (wants("auroc")) cell["auroc"] = auroc(pair);
    }
    if (!entry.gen.empty()) {
      require_file(entry.gen, "generation records");
      const auto records = read_gen_records(entry.gen);
      double ppl_sum = 0.0, sim_sum = 0.0, r2_sum = 0.0, rl_sum = 0.0,
             f1_sum = 0.0;
      int n = 0;
      for (const auto& rec : records) {
        auto it = items.find(rec.id);
        if (it == items.end()) continue;
        const std::string cand = detokenize(rec.output_ids, model.vocab());
        const std::string& ref = it->second.reference;
        if (wants("ppl") && rec.output_ids.size() >= 2)
          ppl_sum += model.perplexity(rec.output_ids);
        if (wants("similarity")) sim_sum += similarity(cand, ref, *provider);
        if (wants("rouge2")) r2_sum += rouge_n(cand, ref, 2);
        if (wants("rougel")) rl_sum += rouge_l(cand, ref);
        if (wants("f1")) f1_sum += token_f1(cand, ref);
        ++n;
      }
      if (n > 0) {
        if (wants("ppl")) cell["ppl"] = ppl_sum / n;
        if (wants("similarity")) cell["similarity"] = sim_sum / n;
        if (wants("rouge2")) cell["rouge2"] = r2_sum / n;
        if (wants("rougel")) cell["rougel"] = rl_sum / n;
        if (wants("f1")) cell["f1"] = f1_sum / n;
        cell["items"] = n;
      }
    }
    report["methods"][entry.method] = cell;

    std::vector<std::string> row{entry.method};
    auto fmt = [&cell](const char* key) {
      if (!cell.contains(key)) return std::string("-");
      std::ostringstream os;
      os << std::fixed << std::setprecision(3) << cell[key].get<double>();
      return os.str();
    };
    for (const auto& m : metrics) {
      if (m == "tpr") row.push_back(fmt("tpr_at_fpr0"));
      else if (m == "auroc") row.push_back(fmt("auroc"));
      else if (m == "ppl") row.push_back(fmt("ppl"));
      else if (m == "similarity") row.push_back(fmt("similarity"));
      else if (m == "rouge2") row.push_back(fmt("rouge2"));
      else if (m == "rougel") row.push_back(fmt("rougel"));
      else row.push_back(fmt("f1"));
    }
    table.push_back(row);
  }
  if (file_provider != nullptr)
    report["embedding_fallbacks"] = file_provider->fallback_count();

  json out{{"header", to_json(make_header(
                          "evaluate", json{{"metrics", opt.metrics}},
                          {{"tasks", file_content_hash(opt.tasks)},
                           {"model", file_content_hash(opt.model)}}))},
           {"report", report}};
  std::ofstream os(opt.out);
  if (!os) throw std::runtime_error("cannot write " + opt.out);
  os << out.dump(2) << '\n';

  // Aligned plain-text table.
  std::vector<size_t> widths(table[0].size(), 0);
  for (const auto& row : table)
    for (size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  for (const auto& row : table) {
    for (size_t c = 0; c < row.size(); ++c)
      std::cout << std::left << std::setw(static_cast<int>(widths[c]) + 2)
                << row[c];
    std::cout << "\n";
  }
  std::cout << "report -> " << opt.out << "\n";
  return 0;
}

// ------------------------------------------------------------------
// analyze

struct AnalyzeOpts {
  std::string tasks;
  std::string model;
  std::string gazetteer;
  std::vector<std::string> gen_files;
  std::string out_dir;
  double threshold = 0.6;
};

void write_histogram_csv(const fs::path& path, const EntropyProfile& profile,
                         const RunHeader& header) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << csv_header_comment(header) << '\n';
  os << "bin_low,bin_high,count\n";
  for (int b = 0; b <= EntropyProfile::kBins; ++b) {
    const double lo = b * EntropyProfile::kBinWidth;
    if (b < EntropyProfile::kBins) {
      os << lo << ',' << lo + EntropyProfile::kBinWidth << ','
         << profile.histogram[b] << '\n';
    } else {
      os << lo << ",inf," << profile.histogram[b] << '\n';
    }
  }
}

int run_analyze(const AnalyzeOpts& opt) {
  require_file(opt.tasks, "tasks file");
  require_file(opt.model, "model file");
  require_file(opt.gazetteer, "gazetteer");
  if (opt.gen_files.empty()) throw UsageError("no generation files given");

  const auto model = NgramModel::load(opt.model);
  const auto items = tasks_by_id(load_task_items(opt.tasks));
  const Gazetteer gazetteer = Gazetteer::load(opt.gazetteer);
  fs::create_directories(opt.out_dir);

  std::vector<std::string> references;
  for (const auto& [id, item] : items) references.push_back(item.reference);
  const TfidfProvider provider = TfidfProvider::fit(references);

  const RunHeader header =
      make_header("analyze", json{{"threshold", opt.threshold}},
                  {{"tasks", file_content_hash(opt.tasks)},
                   {"model", file_content_hash(opt.model)},
                   {"gazetteer", file_content_hash(opt.gazetteer)}});

  // Reference profile: every reference text scored with the same model.
  EntropyProfile ref_profile;
  for (const auto& [id, item] : items) {
    const TokenSeq seq = tokenize(item.reference, model.vocab());
    if (seq.size() < 2) continue;
    const EntropyProfile p = entropy_profile(seq, model);
    for (const auto& [tok, h] : p.per_token) {
      ref_profile.per_token.emplace_back(tok, h);
    }
    ref_profile.histogram += p.histogram;
  }
  write_histogram_csv(fs::path(opt.out_dir) / "reference_entropy.csv",
                      ref_profile, header);

  json report{{"threshold", opt.threshold}, {"methods", json::object()}};
  for (const auto& gen_file : opt.gen_files) {
    require_file(gen_file, "generation records");
    const auto records = read_gen_records(gen_file);
    if (records.empty()) continue;
    const std::string method = to_string(records[0].method);

    EntropyProfile cand_profile;
    double introduced_sum = 0.0, rate_sum = 0.0;
    int n_rated = 0;
    std::map<std::string, std::vector<double>> entity_entropies;
    json item_reports = json::array();
    for (const auto& rec : records) {
      const std::string cand = detokenize(rec.output_ids, model.vocab());
      if (rec.output_ids.size() >= 2) {
        const EntropyProfile p = entropy_profile(rec.output_ids, model);
        for (const auto& [tok, h] : p.per_token)
          cand_profile.per_token.emplace_back(tok, h);
        cand_profile.histogram += p.histogram;
        // Entity-level entropy aggregation over the candidate text.
        for (const auto& span : extract_entities(cand, gazetteer))
          for (int t = span.start; t < span.end; ++t)
            if (const auto h = p.entropy_at(t))
              entity_entropies[span.canonical].push_back(*h);
      }
      auto it = items.find(rec.id);
      if (it == items.end()) continue;
      const auto rep = hallucination_report(cand, it->second.reference,
                                            gazetteer, provider,
                                            opt.threshold);
      json spans = json::array();
      for (const auto& span : rep.introduced_entities) {
        spans.push_back({{"surface", span.surface},
                         {"start", span.start},
                         {"end", span.end},
                         {"canonical", span.canonical}});
      }
      item_reports.push_back({{"id", rec.id},
                              {"introduced_entities", spans},
                              {"avg_introduced", rep.avg_introduced},
                              {"hallucination_rate", rep.hallucination_rate},
                              {"threshold", rep.threshold}});
      introduced_sum += rep.avg_introduced;
      rate_sum += rep.hallucination_rate;
      ++n_rated;
    }

    const double shift = histogram_shift(ref_profile, cand_profile);
    json cell{{"tv_shift", shift}};
    if (n_rated > 0) {
      cell["avg_introduced"] = introduced_sum / n_rated;
      cell["hallucination_rate"] = rate_sum / n_rated;
      cell["items"] = n_rated;
    }
    json entities = json::object();
    for (auto& [canonical, values] : entity_entropies) {
      std::sort(values.begin(), values.end());
      const auto mid = values.size() / 2;
      const double median = values.size() % 2 == 1
                                ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
      entities[canonical] = {{"count", values.size()}, {"median", median}};
    }
    cell["entities"] = entities;
    cell["item_reports"] = item_reports;
    report["methods"][method] = cell;

    write_histogram_csv(fs::path(opt.out_dir) / (method + "_entropy.csv"),
                        cand_profile, header);
    std::cout << method << ": TV shift vs reference = " << shift << "\n";
  }

  json out{{"header", to_json(header)}, {"report", report}};
  std::ofstream os(fs::path(opt.out_dir) / "factuality.json");
  os << out.dump(2) << '\n';
  std::cout << "analysis -> " << opt.out_dir << "\n";
  return 0;
}

// ------------------------------------------------------------------
// judge

struct JudgeOpts {
  std::string pairs;
  std::string out;
  std::string cache = "judge_cache.jsonl";
  std::string model = "gpt-4o-2024-08-06";
  std::string endpoint = "https://api.openai.com";
  std::string api_key_env = "JUDGER_API_KEY";
  bool mock = false;
  uint64_t ab_seed = 1;
  int max_retries = 3;
  int jobs = 1;  // in-flight limit
};

int run_judge(const JudgeOpts& opt) {
  require_file(opt.pairs, "pairs file");

  std::vector<JudgeRequest> requests;
  {
    std::ifstream is(opt.pairs);
    std::string line;
    SplitMix64 ab(opt.ab_seed);
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (j.contains("record")) continue;
      JudgeRequest req;
      req.id = j.at("id").get<std::string>();
      req.task = judge_task_from_string(j.at("task").get<std::string>());
      req.prompt_text = j.at("prompt").get<std::string>();
      const std::string wm = j.at("answer_watermarked").get<std::string>();
      const std::string un = j.at("answer_unwatermarked").get<std::string>();
      req.swapped = ab.next_below(2) == 1;
      req.answer_a = req.swapped ? un : wm;
      req.answer_b = req.swapped ? wm : un;
      requests.push_back(std::move(req));
    }
  }

  std::unique_ptr<JudgeTransport> transport;
  if (opt.mock) {
    transport = std::make_unique<MockTransport>([](const std::string&) {
      return std::string(
          "Mock verdict.\n[[A]]: [4, 5, 5]\n[[B]]: [3, 3, 4]\n");
    });
  } else {
    JudgerConfig config;
    config.endpoint = opt.endpoint;
    config.model = opt.model;
    config.api_key_env = opt.api_key_env;
    config.max_retries = opt.max_retries;
    transport = std::make_unique<HttpTransport>(config);
  }

  JudgeCache cache(opt.cache);
  const auto outcomes =
      judge_batch(requests, *transport, cache, opt.model, opt.max_retries,
                  opt.mock ? 0 : 250, opt.jobs);

  std::ofstream os(opt.out);
  if (!os) throw std::runtime_error("cannot write " + opt.out);
  os << to_json(make_header("judge",
                            json{{"model", opt.model},
                                 {"ab_seed", opt.ab_seed},
                                 {"mock", opt.mock}},
                            {{"pairs", file_content_hash(opt.pairs)}}))
            .dump()
     << '\n';
  int failures = 0;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    json j{{"id", o.request_id},
           {"swapped", requests[i].swapped},
           {"from_cache", o.from_cache}};
    if (o.verdict) {
      j["scores_watermarked"] = o.verdict->scores_a;
      j["scores_unwatermarked"] = o.verdict->scores_b;
    } else {
      j["error"] = o.error;
      ++failures;
    }
    os << j.dump() << '\n';
  }
  std::cout << "judged " << outcomes.size() << " pairs (" << failures
            << " failures) -> " << opt.out << "\n";
  return 0;
}

// ------------------------------------------------------------------
// fws

struct FwsOpts {
  std::string aspects;
  std::string human;
  std::string out;
  std::string configs;  // "alpha:beta,..." overriding the default five
};

std::vector<FwsConfig> parse_fws_configs(const std::string& text) {
  if (text.empty()) return default_sweep_configs();
  std::vector<FwsConfig> configs;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ',')) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos)
      throw UsageError("bad --configs entry (want alpha:beta): " + pair);
    configs.push_back(FwsConfig::normalized(std::stod(pair.substr(0, colon)),
                                            std::stod(pair.substr(colon + 1))));
  }
  if (configs.empty()) throw UsageError("empty --configs list");
  return configs;
}

int run_fws(const FwsOpts& opt) {
  require_file(opt.aspects, "aspects file");

  std::vector<std::string> ids;
  std::vector<AspectScores> scores;
  {
    std::ifstream is(opt.aspects);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (j.contains("record")) continue;
      ids.push_back(j.at("id").get<std::string>());
      if (j.contains("scores_watermarked")) {
        // Judger verdict row: 1-5 Likert triple, normalized to [0, 1].
        const auto& s = j.at("scores_watermarked");
        scores.push_back({normalize_likert(s.at(0).get<double>(), 1, 5),
                          normalize_likert(s.at(1).get<double>(), 1, 5),
                          normalize_likert(s.at(2).get<double>(), 1, 5)});
      } else {
        scores.push_back({j.at("coherence").get<double>(),
                          j.at("relevance").get<double>(),
                          j.at("factual_accuracy").get<double>()});
      }
    }
  }
  if (scores.empty()) throw UsageError("aspects file has no rows");

  const auto configs = parse_fws_configs(opt.configs);
  json fws_table = json::array();
  for (size_t i = 0; i < scores.size(); ++i) {
    json row{{"id", ids[i]},
             {"coherence", scores[i].coherence},
             {"relevance", scores[i].relevance},
             {"factual_accuracy", scores[i].factual_accuracy},
             {"fws", fws(scores[i], FwsConfig{0.4, 0.2})}};
    fws_table.push_back(row);
  }

  json out{{"fws", fws_table}};
  std::map<std::string, std::string> hashes{
      {"aspects", file_content_hash(opt.aspects)}};

  if (!opt.human.empty()) {
    require_file(opt.human, "human ratings");
    hashes["human"] = file_content_hash(opt.human);
    const auto ratings = load_human_ratings_csv(opt.human);
    const auto agg = aggregate_ratings(ratings);

    // Join by item id; human score = FWS of the averaged human aspects.
    std::map<std::string, AspectScores> by_id;
    for (const auto& a : agg) by_id[a.item_id] = a.normalized;
    std::vector<AspectScores> matched;
    std::vector<double> human_scores;
    Eigen::MatrixXd aspect_matrix(static_cast<Eigen::Index>(agg.size()), 3);
    for (size_t i = 0; i < agg.size(); ++i) {
      aspect_matrix(static_cast<Eigen::Index>(i), 0) =
          agg[i].normalized.coherence;
      aspect_matrix(static_cast<Eigen::Index>(i), 1) =
          agg[i].normalized.relevance;
      aspect_matrix(static_cast<Eigen::Index>(i), 2) =
          agg[i].normalized.factual_accuracy;
    }
    for (size_t i = 0; i < ids.size(); ++i) {
      auto it = by_id.find(ids[i]);
      if (it == by_id.end()) continue;
      matched.push_back(scores[i]);
      human_scores.push_back(fws(it->second, FwsConfig{0.4, 0.2}));
    }
    if (matched.size() >= 3) {
      json sweep = json::array();
      for (const auto& row :
           sensitivity_sweep(matched, human_scores, configs)) {
        sweep.push_back({{"alpha", row.config.alpha},
                         {"beta", row.config.beta},
                         {"pearson_r", row.defined ? json(row.pearson_r)
                                                   : json(nullptr)}});
      }
      out["sensitivity"] = sweep;
    } else {
      std::cout << "notice: fewer than 3 matched items; correlations "
                   "skipped\n";
    }
    if (agg.size() >= 3) {
      RatingMatrix matrix;
      matrix.cells = aspect_matrix;
      matrix.columns = {"coherence", "relevance", "factual_accuracy"};
      const auto fn = friedman_nemenyi(matrix);
      json pairs = json::object();
      for (const auto& [key, pair] : fn.pairs) {
        pairs[matrix.columns[static_cast<size_t>(key.first)] + "/" +
              matrix.columns[static_cast<size_t>(key.second)]] = pair.p;
      }
      out["nemenyi"] = {{"friedman_stat", fn.friedman_stat},
                        {"friedman_p", fn.friedman_p},
                        {"pairwise_p", pairs}};
    }
  } else {
    std::cout << "notice: no human ratings given; correlations skipped\n";
  }

  json doc{{"header", to_json(make_header("fws", json::object(), hashes))},
           {"report", out}};
  std::ofstream os(opt.out);
  if (!os) throw std::runtime_error("cannot write " + opt.out);
  os << doc.dump(2) << '\n';
  std::cout << "fws report -> " << opt.out << "\n";
  return 0;
}

// ------------------------------------------------------------------
// sweep

struct SweepOpts {
  std::string model;
  std::string tasks;
  std::string method = "kgw";
  std::string out;
  uint64_t key = 7;
  uint64_t seed = 1;
  int items = 40;
  int max_tokens = 80;
  int permutations = 50;
  int jobs = 1;
};

struct RocPoint {
  double threshold, fpr, tpr;
};

std::vector<RocPoint> roc_points(const ScorePair& pair) {
  std::vector<double> all = pair.positives;
  all.insert(all.end(), pair.negatives.begin(), pair.negatives.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const bool higher = pair.direction == ScoreDirection::higher_is_positive;
  std::vector<RocPoint> points;
  auto rate = [higher](const std::vector<double>& scores, double thr) {
    int n = 0;
    for (double s : scores)
      if (higher ? s > thr : s < thr) ++n;
    return static_cast<double>(n) / static_cast<double>(scores.size());
  };
  for (double thr : all)
    points.push_back({thr, rate(pair.negatives, thr),
                      rate(pair.positives, thr)});
  return points;
}

int run_sweep(const SweepOpts& opt) {
  require_file(opt.model, "model file");
  require_file(opt.tasks, "tasks file");
  const auto model = NgramModel::load(opt.model);
  auto items = load_task_items(opt.tasks);
  if (items.empty()) throw UsageError("tasks file has no items");
  if (static_cast<int>(items.size()) > opt.items)
    items.resize(static_cast<size_t>(opt.items));

  struct Config {
    double gamma = 0.0, delta = 0.0, alpha = 0.0;
    int pseudo_length = 0;
  };
  std::vector<Config> grid;
  if (opt.method == "kgw" || opt.method == "sweet") {
    for (double delta : {0.5, 1.0, 2.0})
      for (double gamma : {0.1, 0.25, 0.5})
        grid.push_back({gamma, delta, 0.0, 0});
  } else if (opt.method == "expedit") {
    for (int n : {100, 200, 300}) grid.push_back({0.0, 0.0, 0.0, n});
  } else if (opt.method == "dipmark") {
    for (double alpha : {0.4, 0.45, 0.5})
      grid.push_back({0.5, 0.0, alpha, 0});
  } else {
    throw UsageError("sweep supports kgw, sweet, dipmark, expedit");
  }

  // Shared unwatermarked baseline.
  GenerateOpts base;
  base.max_tokens = opt.max_tokens;
  SplitMix64 seed_stream(opt.seed);
  std::vector<uint64_t> seeds(items.size());
  for (auto& s : seeds) s = seed_stream.next();
  std::vector<TokenSeq> baseline(items.size());
  parallel_for(static_cast<int>(items.size()), opt.jobs, [&](int i) {
    baseline[static_cast<size_t>(i)] =
        generate_one(model, items[static_cast<size_t>(i)],
                     WatermarkMethod::none, base, seeds[static_cast<size_t>(i)])
            .output_ids;
  });

  std::ofstream os(opt.out);
  if (!os) throw std::runtime_error("cannot write " + opt.out);
  os << csv_header_comment(make_header(
            "sweep",
            json{{"method", opt.method},
                 {"items", static_cast<int>(items.size())},
                 {"max_tokens", opt.max_tokens},
                 {"seed", opt.seed}},
            {{"model", file_content_hash(opt.model)},
             {"tasks", file_content_hash(opt.tasks)}}))
     << '\n';
  os << "method,gamma,delta,entropy_threshold,alpha,pseudo_length,threshold,"
        "fpr,tpr\n";

  struct Summary {
    Config config;
    double tpr0, auc;
  };
  std::vector<Summary> summaries;
  const int vocab_size = model.vocab().size();
  for (const auto& config : grid) {
    GenerateOpts gopt;
    gopt.key = opt.key;
    gopt.key_set = true;
    gopt.max_tokens = opt.max_tokens;
    gopt.gamma = config.gamma;
    gopt.delta = config.delta;
    gopt.alpha = config.alpha;
    gopt.pseudo_length = config.pseudo_length > 0 ? config.pseudo_length : 256;
    const WatermarkMethod method = method_from_string(opt.method);

    std::vector<TokenSeq> watermarked(items.size());
    parallel_for(static_cast<int>(items.size()), opt.jobs, [&](int i) {
      watermarked[static_cast<size_t>(i)] =
          generate_one(model, items[static_cast<size_t>(i)], method, gopt,
                       seeds[static_cast<size_t>(i)])
              .output_ids;
    });

    ScorePair pair;
    auto score_text = [&](const TokenSeq& text, int idx) -> double {
      if (opt.method == "kgw") {
        return kgw_detect(text, WatermarkKey{opt.key}, config.gamma, 4.0,
                          vocab_size)
            .statistic;
      }
      if (opt.method == "sweet") {
        const auto entropies = recompute_entropies(model, text);
        try {
          return sweet_detect(text, entropies, WatermarkKey{opt.key},
                              {config.gamma, config.delta, 0.9}, 4.0,
                              vocab_size)
              .statistic;
        } catch (const UndetectableError&) {
          return 0.0;
        }
      }
      if (opt.method == "dipmark") {
        return dip_detect(text, WatermarkKey{opt.key}, 0.5, 4.0, vocab_size)
            .score.statistic;
      }
      AlignParams params;
      params.num_permutations = opt.permutations;
      params.resample_seed = opt.seed + static_cast<uint64_t>(idx);
      const ExpKey expkey{WatermarkKey{opt.key}, gopt.pseudo_length,
                          vocab_size};
      // Negate so that larger means more watermarked, like the others.
      return -exp_detect(text, expkey, params, 1).statistic;
    };

    std::vector<double> pos(items.size()), neg(items.size());
    parallel_for(static_cast<int>(items.size()), opt.jobs, [&](int i) {
      pos[static_cast<size_t>(i)] =
          score_text(watermarked[static_cast<size_t>(i)], i);
      neg[static_cast<size_t>(i)] =
          score_text(baseline[static_cast<size_t>(i)],
                     static_cast<int>(items.size()) + i);
    });
    pair.positives = pos;
    pair.negatives = neg;
    pair.direction = ScoreDirection::higher_is_positive;

    for (const auto& pt : roc_points(pair)) {
      os << opt.method << ',' << config.gamma << ',' << config.delta << ','
         << (opt.method == "sweet" ? "0.9" : "") << ',' << config.alpha << ','
         << config.pseudo_length << ',' << pt.threshold << ',' << pt.fpr
         << ',' << pt.tpr << '\n';
    }
    summaries.push_back({config, tpr_at_fpr0(pair), auroc(pair)});
    std::cout << opt.method << " gamma=" << config.gamma
              << " delta=" << config.delta << " alpha=" << config.alpha
              << " n=" << config.pseudo_length
              << ": TPR@FPR0=" << summaries.back().tpr0
              << " AUROC=" << summaries.back().auc << "\n";
  }

  // Observed-trend note (not enforced): larger delta should help detection.
  if (opt.method == "kgw" || opt.method == "sweet") {
    bool monotone = true;
    for (double gamma : {0.1, 0.25, 0.5}) {
      double prev = -1.0;
      for (const auto& s : summaries) {
        if (s.config.gamma != gamma) continue;
        if (s.tpr0 < prev - 1e-12) monotone = false;
        prev = s.tpr0;
      }
    }
    std::cout << "trend: TPR@FPR0 monotone in delta per gamma: "
              << (monotone ? "yes" : "no") << "\n";
  }
  std::cout << "roc points -> " << opt.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"watermark evaluation workflow for n-gram text generation"};
  app.set_config("--config", "", "key=value configuration file; flags win");
  app.require_subcommand(1);
  app.add_flag("--deterministic", g_deterministic,
               "omit timestamps from output headers");

  MakeCorpusOpts corpus_opts;
  auto* corpus_cmd = app.add_subcommand(
      "make-corpus", "write the bundled deterministic synthetic corpus");
  corpus_cmd->add_option("--out", corpus_opts.out)->required();
  corpus_cmd->add_option("--docs", corpus_opts.docs);
  corpus_cmd->add_option("--seed", corpus_opts.seed);

  TasksOpts tasks_opts;
  auto* tasks_cmd =
      app.add_subcommand("tasks", "build task items from a dataset file");
  tasks_cmd->add_option("--input", tasks_opts.input)->required();
  tasks_cmd->add_option("--task", tasks_opts.task)
      ->check(CLI::IsMember({"completion", "qa", "summarization"}));
  tasks_cmd->add_option("--out", tasks_opts.out)->required();
  tasks_cmd->add_option("--limit", tasks_opts.limit);
  tasks_cmd->add_option("--shuffle-seed", tasks_opts.shuffle_seed);

  TrainOpts train_opts;
  auto* train_cmd =
      app.add_subcommand("train-lm", "train the n-gram reference model");
  train_cmd->add_option("--corpus", train_opts.corpus)->required();
  train_cmd->add_option("--order", train_opts.order);
  train_cmd->add_option("--k", train_opts.k);
  train_cmd->add_option("--out", train_opts.out)->required();
  train_cmd->add_option("--holdout", train_opts.holdout);

  GenerateOpts gen_opts;
  auto* gen_cmd = app.add_subcommand("generate",
                                     "generate records for task items");
  gen_cmd->add_option("--model", gen_opts.model)->required();
  gen_cmd->add_option("--tasks", gen_opts.tasks)->required();
  gen_cmd->add_option("--method", gen_opts.method)
      ->check(CLI::IsMember({"none", "kgw", "sweet", "dipmark", "expedit"}));
  gen_cmd->add_option("--key", gen_opts.key)->each([&](const std::string&) {
    gen_opts.key_set = true;
  });
  gen_cmd->add_option("--seed", gen_opts.seed);
  gen_cmd->add_option("--max-tokens", gen_opts.max_tokens);
  gen_cmd->add_option("--out", gen_opts.out)->required();
  gen_cmd->add_option("--gamma", gen_opts.gamma);
  gen_cmd->add_option("--delta", gen_opts.delta);
  gen_cmd->add_option("--entropy-threshold", gen_opts.entropy_threshold);
  gen_cmd->add_option("--alpha", gen_opts.alpha);
  gen_cmd->add_option("--pseudo-length", gen_opts.pseudo_length);
  gen_cmd->add_option("--jobs", gen_opts.jobs);

  DetectOpts det_opts;
  auto* det_cmd = app.add_subcommand("detect", "score texts for watermarks");
  det_cmd->add_option("--model", det_opts.model)->required();
  det_cmd->add_option("--method", det_opts.method)
      ->check(CLI::IsMember(
          {"kgw", "sweet", "dipmark", "expedit", "logrank", "detectgpt"}));
  det_cmd->add_option("--key", det_opts.key)->each([&](const std::string&) {
    det_opts.key_set = true;
  });
  det_cmd->add_option("--input", det_opts.input);
  det_cmd->add_option("--text-file", det_opts.text_file);
  det_cmd->add_option("--out", det_opts.out)->required();
  det_cmd->add_option("--z-threshold", det_opts.z_threshold);
  det_cmd->add_option("--p-threshold", det_opts.p_threshold);
  det_cmd->add_option("--gamma", det_opts.gamma);
  det_cmd->add_option("--entropy-threshold", det_opts.entropy_threshold);
  det_cmd->add_option("--entropy-source", det_opts.entropy_source)
      ->check(CLI::IsMember({"recorded", "model"}));
  det_cmd->add_option("--pseudo-length", det_opts.pseudo_length);
  det_cmd->add_option("--permutations", det_opts.permutations);
  det_cmd->add_option("--resample-seed", det_opts.resample_seed);
  det_cmd->add_option("--block-len", det_opts.block_len);
  det_cmd->add_option("--gamma-edit", det_opts.gamma_edit);
  det_cmd->add_option("--logrank-threshold", det_opts.logrank_threshold)
      ->each([&](const std::string&) { det_opts.logrank_threshold_set = true; });
  det_cmd->add_option("--naturals", det_opts.naturals);
  det_cmd->add_option("--num-perturbations", det_opts.num_perturbations);
  det_cmd->add_option("--perturb-fraction", det_opts.perturb_fraction);
  det_cmd->add_option("--curvature-threshold", det_opts.curvature_threshold);
  det_cmd->add_option("--detect-seed", det_opts.detect_seed);
  det_cmd->add_option("--jobs", det_opts.jobs);

  EvaluateOpts eval_opts;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "detection and quality metrics report");
  eval_cmd->add_option("--tasks", eval_opts.tasks)->required();
  eval_cmd->add_option("--model", eval_opts.model)->required();
  eval_cmd->add_option("--out", eval_opts.out)->required();
  eval_cmd->add_option("--metrics", eval_opts.metrics);
  eval_cmd->add_option("--manifest", eval_opts.manifest);
  eval_cmd->add_option("--method", eval_opts.single.method);
  eval_cmd->add_option("--gen", eval_opts.single.gen);
  eval_cmd->add_option("--pos", eval_opts.single.pos);
  eval_cmd->add_option("--neg", eval_opts.single.neg);
  eval_cmd->add_option("--embeddings", eval_opts.embeddings);

  AnalyzeOpts ana_opts;
  auto* ana_cmd = app.add_subcommand(
      "analyze", "entropy-shift and entity-hallucination analyses");
  ana_cmd->add_option("--tasks", ana_opts.tasks)->required();
  ana_cmd->add_option("--model", ana_opts.model)->required();
  ana_cmd->add_option("--gazetteer", ana_opts.gazetteer)->required();
  ana_cmd->add_option("--gen", ana_opts.gen_files)->required();
  ana_cmd->add_option("--out-dir", ana_opts.out_dir)->required();
  ana_cmd->add_option("--threshold", ana_opts.threshold);

  JudgeOpts judge_opts;
  auto* judge_cmd =
      app.add_subcommand("judge", "pairwise quality judging via LLM");
  judge_cmd->add_option("--pairs", judge_opts.pairs)->required();
  judge_cmd->add_option("--out", judge_opts.out)->required();
  judge_cmd->add_option("--cache", judge_opts.cache);
  judge_cmd->add_option("--model", judge_opts.model);
  judge_cmd->add_option("--endpoint", judge_opts.endpoint);
  judge_cmd->add_option("--api-key-env", judge_opts.api_key_env);
  judge_cmd->add_flag("--mock", judge_opts.mock);
  judge_cmd->add_option("--ab-seed", judge_opts.ab_seed);
  judge_cmd->add_option("--max-retries", judge_opts.max_retries);
  judge_cmd->add_option("--jobs", judge_opts.jobs,
                        "in-flight request limit");

  FwsOpts fws_opts;
  auto* fws_cmd = app.add_subcommand(
      "fws", "factuality-weighted scores, correlations, significance");
  fws_cmd->add_option("--aspects", fws_opts.aspects)->required();
  fws_cmd->add_option("--human", fws_opts.human);
  fws_cmd->add_option("--out", fws_opts.out)->required();
  fws_cmd->add_option("--configs", fws_opts.configs,
                      "alpha:beta pairs, comma separated");

  SweepOpts sweep_opts;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "hyperparameter sweep emitting ROC points");
  sweep_cmd->add_option("--model", sweep_opts.model)->required();
  sweep_cmd->add_option("--tasks", sweep_opts.tasks)->required();
  sweep_cmd->add_option("--method", sweep_opts.method);
  sweep_cmd->add_option("--out", sweep_opts.out)->required();
  sweep_cmd->add_option("--key", sweep_opts.key);
  sweep_cmd->add_option("--seed", sweep_opts.seed);
  sweep_cmd->add_option("--items", sweep_opts.items);
  sweep_cmd->add_option("--max-tokens", sweep_opts.max_tokens);
  sweep_cmd->add_option("--permutations", sweep_opts.permutations);
  sweep_cmd->add_option("--jobs", sweep_opts.jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (corpus_cmd->parsed()) return run_make_corpus(corpus_opts);
    if (tasks_cmd->parsed()) return run_tasks(tasks_opts);
    if (train_cmd->parsed()) return run_train_lm(train_opts);
    if (gen_cmd->parsed()) return run_generate(gen_opts);
    if (det_cmd->parsed()) return run_detect(det_opts);
    if (eval_cmd->parsed()) return run_evaluate(eval_opts);
    if (ana_cmd->parsed()) return run_analyze(ana_opts);
    if (judge_cmd->parsed()) return run_judge(judge_opts);
    if (fws_cmd->parsed()) return run_fws(fws_opts);
    if (sweep_cmd->parsed()) return run_sweep(sweep_opts);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
