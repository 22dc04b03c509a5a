// Copyright 2026 The tabilp Authors
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

// Batch front end over the C API. Every subcommand writes JSONL (to --out
// or stdout) and a short summary to stderr.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tabilp/tabilp.h"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kExitError = 1;
constexpr int kExitMissingPath = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void Fail(int code, const std::string& message) { throw CliError{code, message}; }

void Check(tabilp_status s) {
  if (s == TABILP_OK) return;
  Fail(s == TABILP_IO_ERROR ? kExitMissingPath : kExitError, tabilp_last_error());
}

std::string Take(char* s) {
  std::string out = s ? s : "";
  tabilp_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Tables = Handle<tabilp_tables, tabilp_tables_free>;
using Questions = Handle<tabilp_questions, tabilp_questions_free>;
using Config = Handle<tabilp_config, tabilp_config_free>;
using Corpus = Handle<tabilp_corpus, tabilp_corpus_free>;
using Ir = Handle<tabilp_ir, tabilp_ir_free>;
using Scorer = Handle<tabilp_scorer, tabilp_scorer_free>;
using Problem = Handle<tabilp_problem, tabilp_problem_free>;
using Combiner = Handle<tabilp_combiner, tabilp_combiner_free>;

struct Options {
  std::string tables;
  std::string questions;
  std::string corpus;
  std::string config;
  std::optional<double> xi;
  std::string cascade;
  std::size_t workers = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_limit;
  std::string out;

  std::string scorer;
  std::string et_train;
  std::string et_scores;
  std::string scorecards;
  std::string answers;
  std::string dataset;
  std::string model;
  std::vector<std::string> mps;
  std::optional<double> threshold;
  bool big_m = false;
  bool no_support = false;
  bool lp_bound = false;
};

void RequirePath(const std::string& path, const char* flag) {
  if (path.empty()) Fail(kExitError, std::string(flag) + " is required");
  if (!fs::exists(path)) Fail(kExitMissingPath, std::string(flag) + ": no such path: " + path);
}

void OptionalPath(const std::string& path, const char* flag) {
  if (!path.empty()) RequirePath(path, flag);
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      Fail(kExitError, "--cascade: not a number: '" + item + "'");
    }
  }
  return out;
}

// The config file with command-line overrides applied; parsed once by the
// library so every value is validated in one place.
struct Settings {
  Config handle;
  Json json;

  std::optional<double> xi() const {
    const Json& v = json["essential"]["xi"];
    return v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
  }
  std::vector<double> cascade() const { return json["essential"]["cascade"].get<std::vector<double>>(); }
  std::string scorer() const { return json["essential"]["scorer"].get<std::string>(); }
  std::size_t pmi_window() const { return json["essential"]["pmi_window"].get<std::size_t>(); }
};

Settings LoadSettings(const Options& o) {
  tabilp_config* raw = nullptr;
  if (o.config.empty()) {
    Check(tabilp_config_default(&raw));
  } else {
    RequirePath(o.config, "--config");
    Check(tabilp_config_load(o.config.c_str(), &raw));
  }
  Config base(raw);
  Json j = Json::parse(Take([&] {
    char* s = nullptr;
    Check(tabilp_config_to_json(base.get(), &s));
    return s;
  }()));
  if (o.seed) j["seed"] = *o.seed;
  if (o.time_limit) {
    j["reason"]["time_limit_seconds"] = *o.time_limit > 0 ? Json(*o.time_limit) : Json();
  }
  if (o.xi) j["essential"]["xi"] = *o.xi;
  if (!o.cascade.empty()) j["essential"]["cascade"] = ParseList(o.cascade);
  if (!o.scorer.empty()) j["essential"]["scorer"] = o.scorer;
  Settings s;
  tabilp_config* merged = nullptr;
  Check(tabilp_config_parse(j.dump().c_str(), &merged));
  s.handle.reset(merged);
  s.json = std::move(j);
  return s;
}

Tables LoadTables(const Options& o) {
  RequirePath(o.tables, "--tables");
  tabilp_tables* t = nullptr;
  Check(tabilp_tables_load(o.tables.c_str(), &t));
  return Tables(t);
}

Questions LoadQuestions(const Options& o) {
  RequirePath(o.questions, "--questions");
  tabilp_questions* q = nullptr;
  Check(tabilp_questions_load(o.questions.c_str(), &q));
  return Questions(q);
}

Corpus LoadCorpus(const Options& o, const Settings& s) {
  if (o.corpus.empty()) return nullptr;
  RequirePath(o.corpus, "--corpus");
  tabilp_corpus* c = nullptr;
  Check(tabilp_corpus_load(o.corpus.c_str(), s.pmi_window(), &c));
  return Corpus(c);
}

Scorer MakeScorer(const Options& o, const Settings& s, const tabilp_corpus* corpus) {
  OptionalPath(o.et_train, "--et-train");
  OptionalPath(o.et_scores, "--et-scores");
  tabilp_scorer* out = nullptr;
  Check(tabilp_scorer_create(s.scorer().c_str(), o.et_train.empty() ? nullptr : o.et_train.c_str(),
                             o.et_scores.empty() ? nullptr : o.et_scores.c_str(), corpus,
                             s.handle.get(), &out));
  return Scorer(out);
}

// Question indices ordered by id; equal ids keep file order.
std::vector<std::size_t> IdOrder(const tabilp_questions* q) {
  std::vector<std::size_t> order(tabilp_questions_count(q));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [q](std::size_t a, std::size_t b) {
    return std::string(tabilp_questions_id(q, a)) < tabilp_questions_id(q, b);
  });
  return order;
}

// Runs `job(i)` for i in [0, n) on `workers` threads. The first failure by
// index is rethrown after all threads finish.
template <typename F>
void ParallelFor(std::size_t n, std::size_t workers, F job) {
  std::vector<std::optional<CliError>> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (const CliError& e) {
        errors[i] = e;
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();
  for (auto& e : errors) {
    if (e) throw *e;
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) Fail(kExitMissingPath, "cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void Line(const std::string& s) { stream() << s << '\n'; }

 private:
  std::ofstream file_;
};

struct Tally {
  std::size_t questions = 0;
  std::size_t graded = 0;
  double score = 0.0;
  std::size_t abstained = 0;
  std::size_t timeouts = 0;

  void Add(const Json& answer) {
    ++questions;
    if (answer.contains("score")) {
      ++graded;
      score += answer["score"].get<double>();
    }
    if (answer.value("abstained", false)) ++abstained;
    if (answer.value("status", "") == "timeout") ++timeouts;
  }
  void Print(const char* what, double seconds) const {
    std::fprintf(stderr, "%s: %zu questions", what, questions);
    if (graded > 0) {
      std::fprintf(stderr, ", score %.4g/%zu = %.4f", score, graded, score / graded);
    }
    std::fprintf(stderr, ", %zu abstained, %zu timeouts, %.2fs\n", abstained, timeouts, seconds);
  }
};

double Since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// solve and cascade share everything but the essential-term mode.
int RunAnswers(const Options& o, bool cascade) {
  const auto start = std::chrono::steady_clock::now();
  Settings s = LoadSettings(o);
  Tables tables = LoadTables(o);
  Questions questions = LoadQuestions(o);
  Corpus corpus = LoadCorpus(o, s);
  if (!o.scorecards.empty() && fs::path(o.scorecards).has_parent_path() &&
      !fs::exists(fs::path(o.scorecards).parent_path())) {
    Fail(kExitMissingPath, "--scorecards: no such directory: " + o.scorecards);
  }

  tabilp_answer_options opts{};
  opts.mode = TABILP_ET_NONE;
  opts.include_support = o.no_support ? 0 : 1;
  const std::vector<double> thresholds =
      s.cascade().empty() ? std::vector<double>{0.4, 0.6, 0.8, 1.0} : s.cascade();
  Scorer scorer;
  if (cascade) {
    opts.mode = o.big_m ? TABILP_ET_CASCADE_BIG_M : TABILP_ET_CASCADE;
    opts.thresholds = thresholds.data();
    opts.num_thresholds = thresholds.size();
  } else if (s.xi()) {
    opts.mode = TABILP_ET_FORCE;
    opts.xi = *s.xi();
  }
  if (opts.mode != TABILP_ET_NONE) {
    scorer = MakeScorer(o, s, corpus.get());
    opts.scorer = scorer.get();
  }
  Ir ir;
  if (corpus && !o.scorecards.empty()) {
    tabilp_ir* raw = nullptr;
    Check(tabilp_ir_create(corpus.get(), s.handle.get(), &raw));
    ir.reset(raw);
    opts.ir = ir.get();
  }

  const std::size_t n = tabilp_questions_count(questions.get());
  std::vector<std::string> answers(n), cards(n);
  const bool want_cards = !o.scorecards.empty();
  ParallelFor(n, o.workers, [&](std::size_t i) {
    char* answer = nullptr;
    char* card = nullptr;
    Check(tabilp_answer(tables.get(), questions.get(), i, s.handle.get(), &opts, &answer,
                        want_cards ? &card : nullptr));
    answers[i] = Take(answer);
    if (want_cards) cards[i] = Take(card);
  });

  Output out(o.out);
  std::optional<Output> card_out;
  if (want_cards) card_out.emplace(o.scorecards);
  Tally tally;
  for (std::size_t i : IdOrder(questions.get())) {
    out.Line(answers[i]);
    if (card_out) card_out->Line(cards[i]);
    tally.Add(Json::parse(answers[i]));
  }
  tally.Print(cascade ? "cascade" : "solve", Since(start));
  return 0;
}

int RunEval(const Options& o) {
  Questions questions = LoadQuestions(o);
  RequirePath(o.answers, "--answers");
  std::ifstream in(o.answers);
  std::map<std::string, std::vector<std::size_t>> chosen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      chosen[j.at("id").get<std::string>()] = j.at("chosen").get<std::vector<std::size_t>>();
    } catch (const nlohmann::json::exception& e) {
      Fail(kExitError, o.answers + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  Output out(o.out);
  Tally tally;
  std::size_t missing = 0;
  for (std::size_t i : IdOrder(questions.get())) {
    const std::string id = tabilp_questions_id(questions.get(), i);
    const std::int64_t gold = tabilp_questions_gold(questions.get(), i);
    Json j;
    j["id"] = id;
    auto it = chosen.find(id);
    const std::vector<std::size_t> picks = it == chosen.end() ? std::vector<std::size_t>{} : it->second;
    if (it == chosen.end()) ++missing;
    j["chosen"] = picks;
    j["abstained"] = picks.empty();
    if (gold >= 0) {
      j["gold"] = gold;
      j["score"] = tabilp_eval_score(picks.data(), picks.size(), static_cast<std::size_t>(gold));
    }
    tally.Add(j);
    out.Line(j.dump());
  }
  tally.Print("eval", 0.0);
  if (missing > 0) std::fprintf(stderr, "eval: %zu questions had no answer line\n", missing);
  return 0;
}

std::string FileStem(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out.empty() ? "question" : out;
}

int RunExport(const Options& o) {
  Settings s = LoadSettings(o);
  Tables tables = LoadTables(o);
  Questions questions = LoadQuestions(o);
  if (o.out.empty()) Fail(kExitError, "--out (a directory) is required");
  Corpus corpus = LoadCorpus(o, s);

  tabilp_answer_options opts{};
  opts.mode = TABILP_ET_NONE;
  const std::vector<double> thresholds = s.cascade();
  Scorer scorer;
  if (!thresholds.empty()) {
    opts.mode = TABILP_ET_CASCADE_BIG_M;
    opts.thresholds = thresholds.data();
    opts.num_thresholds = thresholds.size();
  } else if (s.xi()) {
    opts.mode = TABILP_ET_FORCE;
    opts.xi = *s.xi();
  }
  if (opts.mode != TABILP_ET_NONE) {
    scorer = MakeScorer(o, s, corpus.get());
    opts.scorer = scorer.get();
  }

  const std::size_t n = tabilp_questions_count(questions.get());
  if (n > 0) {
    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (ec) Fail(kExitMissingPath, "cannot create " + o.out + ": " + ec.message());
  }
  std::vector<std::string> lines(n);
  ParallelFor(n, o.workers, [&](std::size_t i) {
    tabilp_problem* raw = nullptr;
    Check(tabilp_problem_build(tables.get(), questions.get(), i, s.handle.get(), &opts, &raw));
    Problem p(raw);
    const std::string id = tabilp_questions_id(questions.get(), i);
    const fs::path file = fs::path(o.out) / (FileStem(id) + ".mps");
    Check(tabilp_problem_write_mps(p.get(), file.string().c_str()));
    Json j;
    j["id"] = id;
    j["file"] = file.string();
    j["variables"] = tabilp_problem_num_variables(p.get());
    j["constraints"] = tabilp_problem_num_constraints(p.get());
    lines[i] = j.dump();
  });
  for (std::size_t i : IdOrder(questions.get())) std::cout << lines[i] << '\n';
  std::fprintf(stderr, "export-ilp: %zu programs written to %s\n", n, o.out.c_str());
  return 0;
}

const char* StatusName(tabilp_solve_status s) {
  switch (s) {
    case TABILP_SOLVE_OPTIMAL: return "optimal";
    case TABILP_SOLVE_INFEASIBLE: return "infeasible";
    case TABILP_SOLVE_TIMEOUT: return "timeout";
  }
  return "unknown";
}

int RunSolveMps(const Options& o) {
  if (o.mps.empty()) Fail(kExitError, "give at least one MPS file");
  for (const std::string& f : o.mps) RequirePath(f, "MPS file");
  Settings s = LoadSettings(o);
  Output out(o.out);
  std::size_t optimal = 0;
  for (const std::string& f : o.mps) {
    tabilp_problem* raw = nullptr;
    Check(tabilp_problem_read_mps(f.c_str(), &raw));
    Problem p(raw);
    tabilp_solve_result r{};
    Check(tabilp_problem_solve(p.get(), s.handle.get(), &r, nullptr, 0));
    Json j;
    j["file"] = f;
    j["status"] = StatusName(r.status);
    j["objective"] = r.status == TABILP_SOLVE_INFEASIBLE ? Json() : Json(r.objective);
    j["variables"] = tabilp_problem_num_variables(p.get());
    j["constraints"] = tabilp_problem_num_constraints(p.get());
    j["nodes"] = r.nodes;
    j["lp_iterations"] = r.lp_iterations;
    if (o.lp_bound) {
      double bound = 0.0;
      int feasible = 0;
      Check(tabilp_problem_lp_relax(p.get(), &bound, &feasible));
      j["lp_bound"] = feasible ? Json(bound) : Json();
    }
    if (r.status == TABILP_SOLVE_OPTIMAL) ++optimal;
    out.Line(j.dump());
  }
  std::fprintf(stderr, "solve-mps: %zu of %zu programs solved to optimality\n", optimal,
               o.mps.size());
  return 0;
}

int RunEtScore(const Options& o) {
  Settings s = LoadSettings(o);
  RequirePath(o.dataset, "--dataset");
  Corpus corpus = LoadCorpus(o, s);
  Questions questions;
  if (!o.questions.empty()) questions = LoadQuestions(o);
  Scorer scorer = MakeScorer(o, s, corpus.get());
  const double threshold = o.threshold ? *o.threshold : s.xi().value_or(0.5);
  char* scores = nullptr;
  tabilp_et_metrics m{};
  Check(tabilp_scorer_evaluate(scorer.get(), o.dataset.c_str(), questions.get(), threshold,
                               o.out.empty() ? nullptr : &scores, &m));
  if (!o.out.empty()) {
    Output out(o.out);
    out.stream() << Take(scores);
  }
  Json j;
  j["scorer"] = s.scorer();
  j["threshold"] = threshold;
  j["auc"] = m.auc;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["map"] = m.map;
  j["terms"] = m.terms;
  j["questions"] = m.questions;
  std::cout << j.dump() << '\n';
  std::fprintf(stderr, "%-10s %6s %6s %6s %6s %6s %6s\n", "scorer", "AUC", "Acc", "P", "R", "F1",
               "MAP");
  std::fprintf(stderr, "%-10s %6.3f %6.3f %6.3f %6.3f %6.3f %6.3f  (%zu terms, xi %.3g)\n",
               s.scorer().c_str(), m.auc, m.accuracy, m.precision, m.recall, m.f1, m.map, m.terms,
               threshold);
  return 0;
}

int RunTrainCombiner(const Options& o) {
  Settings s = LoadSettings(o);
  RequirePath(o.scorecards, "--scorecards");
  tabilp_combiner* raw = nullptr;
  Check(tabilp_combiner_train(o.scorecards.c_str(), s.handle.get(), &raw));
  Combiner model(raw);
  char* json = nullptr;
  Check(tabilp_combiner_to_json(model.get(), &json));
  Output out(o.out);
  out.stream() << Take(json);
  std::fprintf(stderr, "train-combiner: model written to %s\n",
               o.out.empty() ? "stdout" : o.out.c_str());
  return 0;
}

int RunCombine(const Options& o) {
  RequirePath(o.model, "--model");
  RequirePath(o.scorecards, "--scorecards");
  tabilp_combiner* raw = nullptr;
  Check(tabilp_combiner_load(o.model.c_str(), &raw));
  Combiner model(raw);
  std::ifstream in(o.scorecards);
  std::vector<std::pair<std::string, std::string>> results;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    char* result = nullptr;
    Check(tabilp_combiner_combine(model.get(), line.c_str(), &result));
    std::string r = Take(result);
    results.emplace_back(Json::parse(r)["id"].get<std::string>(), std::move(r));
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Output out(o.out);
  Tally tally;
  for (const auto& [id, r] : results) {
    out.Line(r);
    tally.Add(Json::parse(r));
  }
  tally.Print("combine", 0.0);
  return 0;
}

void AddCommon(CLI::App* app, Options& o) {
  app->add_option("--tables", o.tables, "Table file (.tsv) or directory");
  app->add_option("--questions", o.questions, "Questions (JSONL)");
  app->add_option("--corpus", o.corpus, "Sentence-per-line corpus");
  app->add_option("--config", o.config, "Run configuration (JSON)");
  app->add_option("--xi", o.xi, "Essential-term threshold");
  app->add_option("--cascade", o.cascade, "Cascade thresholds, e.g. 0.4,0.6,0.8,1.0");
  app->add_option("--workers", o.workers, "Parallel workers")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "Random seed");
  app->add_option("--time-limit", o.time_limit, "Per-solve time limit in seconds (<= 0: none)");
  app->add_option("--out", o.out, "Output file (directory for export-ilp)");
  app->add_option("--scorer", o.scorer, "prop-surf, prop-lem, max-pmi, sum-pmi or file");
  app->add_option("--et-train", o.et_train, "Essential-term training set (TSV)");
  app->add_option("--et-scores", o.et_scores, "Precomputed term scores (JSONL)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Table-based question answering with exact 0/1 programs"};
  app.require_subcommand(1);
  Options o;

  CLI::App* solve = app.add_subcommand("solve", "Answer every question");
  AddCommon(solve, o);
  solve->add_option("--scorecards", o.scorecards, "Also write per-question scorecards here");
  solve->add_flag("--no-support", o.no_support, "Leave support graphs out of the answers");

  CLI::App* cascade = app.add_subcommand("cascade", "Answer with the essential-term cascade");
  AddCommon(cascade, o);
  cascade->add_option("--scorecards", o.scorecards, "Also write per-question scorecards here");
  cascade->add_flag("--big-m", o.big_m, "Solve the cascade as one big-M program");
  cascade->add_flag("--no-support", o.no_support, "Leave support graphs out of the answers");

  CLI::App* eval = app.add_subcommand("eval", "Score an answer file against gold");
  AddCommon(eval, o);
  eval->add_option("--answers", o.answers, "Answers (JSONL with id and chosen)");

  CLI::App* exp = app.add_subcommand("export-ilp", "Write one MPS file per question");
  AddCommon(exp, o);

  CLI::App* mps = app.add_subcommand("solve-mps", "Solve MPS files");
  AddCommon(mps, o);
  mps->add_option("files", o.mps, "MPS files");
  mps->add_flag("--lp-bound", o.lp_bound, "Also report the LP relaxation bound");

  CLI::App* et = app.add_subcommand("et-score", "Score and evaluate essential terms");
  AddCommon(et, o);
  et->add_option("--dataset", o.dataset, "Labelled terms (TSV)");
  et->add_option("--threshold", o.threshold, "Decision threshold (default: xi or 0.5)");

  CLI::App* train = app.add_subcommand("train-combiner", "Fit the solver combination");
  AddCommon(train, o);
  train->add_option("--scorecards", o.scorecards, "Scorecards (JSONL)");

  CLI::App* combine = app.add_subcommand("combine", "Apply a trained combination");
  AddCommon(combine, o);
  combine->add_option("--model", o.model, "Trained model (JSON)");
  combine->add_option("--scorecards", o.scorecards, "Scorecards (JSONL)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return RunAnswers(o, false);
    if (cascade->parsed()) return RunAnswers(o, true);
    if (eval->parsed()) return RunEval(o);
    if (exp->parsed()) return RunExport(o);
    if (mps->parsed()) return RunSolveMps(o);
    if (et->parsed()) return RunEtScore(o);
    if (train->parsed()) return RunTrainCombiner(o);
    if (combine->parsed()) return RunCombine(o);
  } catch (const CliError& e) {
    std::fprintf(stderr, "tabilp: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "tabilp: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
