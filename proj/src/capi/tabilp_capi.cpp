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

#include "tabilp/tabilp.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"
#include "tabilp/config.hpp"
#include "tabilp/ensemble.hpp"
#include "tabilp/error.hpp"
#include "tabilp/essential.hpp"
#include "tabilp/kb.hpp"
#include "tabilp/lp.hpp"
#include "tabilp/model.hpp"
#include "tabilp/mps.hpp"
#include "tabilp/reason.hpp"
#include "tabilp/solver.hpp"
#include "tabilp/support.hpp"

struct tabilp_tables {
  std::vector<tabilp::Table> tables;
};
struct tabilp_questions {
  std::vector<tabilp::QuestionInstance> questions;
};
struct tabilp_config {
  tabilp::RunConfig config;
};
struct tabilp_corpus {
  explicit tabilp_corpus(tabilp::Corpus c) : corpus(std::move(c)) {}
  tabilp::Corpus corpus;
};
struct tabilp_ir {
  explicit tabilp_ir(tabilp::IrIndex i) : index(std::move(i)) {}
  tabilp::IrIndex index;
};
struct tabilp_scorer {
  std::shared_ptr<const tabilp::TermScorer> scorer;
};
struct tabilp_problem {
  tabilp::IlpProblem problem;
};
struct tabilp_combiner {
  tabilp::CombinerModel model;
};

namespace {

using Json = nlohmann::ordered_json;

thread_local std::string g_last_error;

tabilp_status Fail(tabilp_status s, const std::string& what) {
  g_last_error = what;
  return s;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename F>
tabilp_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return TABILP_OK;
  } catch (const tabilp::Error& e) {
    switch (e.code()) {
      case tabilp::ErrorCode::kInvalidArgument: return Fail(TABILP_INVALID_ARGUMENT, e.what());
      case tabilp::ErrorCode::kIo: return Fail(TABILP_IO_ERROR, e.what());
      case tabilp::ErrorCode::kParse: return Fail(TABILP_PARSE_ERROR, e.what());
      case tabilp::ErrorCode::kInternal: return Fail(TABILP_INTERNAL_ERROR, e.what());
    }
    return Fail(TABILP_INTERNAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(TABILP_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return Fail(TABILP_INTERNAL_ERROR, e.what());
  }
}

void Require(bool ok, const char* what) {
  if (!ok) tabilp::ThrowInvalid(what);
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const tabilp::QuestionInstance& Question(const tabilp_questions* q, std::size_t index) {
  Require(q != nullptr, "questions handle is null");
  Require(index < q->questions.size(), "question index out of range");
  return q->questions[index];
}

const tabilp::RunConfig& Config(const tabilp_config* c) {
  static const tabilp::RunConfig kDefault;
  return c ? c->config : kDefault;
}

tabilp::EssentialityProfile Profile(const tabilp_answer_options* o,
                                    const tabilp::QuestionInstance& q) {
  Require(o->scorer != nullptr, "essential-term mode needs a scorer");
  return tabilp::ScoreQuestion(*o->scorer->scorer, q);
}

std::vector<double> Thresholds(const tabilp_answer_options* o) {
  Require(o->num_thresholds == 0 || o->thresholds != nullptr, "thresholds pointer is null");
  return std::vector<double>(o->thresholds, o->thresholds + o->num_thresholds);
}

}  // namespace

extern "C" {

const char* tabilp_version(void) { return "1.0.0"; }

const char* tabilp_last_error(void) { return g_last_error.c_str(); }

void tabilp_string_free(char* s) { std::free(s); }

tabilp_status tabilp_config_default(tabilp_config** out) {
  return Guard([&] {
    Require(out != nullptr, "output pointer is null");
    *out = new tabilp_config{};
  });
}

tabilp_status tabilp_config_parse(const char* json, tabilp_config** out) {
  return Guard([&] {
    Require(json != nullptr && out != nullptr, "null argument");
    *out = new tabilp_config{tabilp::ParseConfig(json)};
  });
}

tabilp_status tabilp_config_load(const char* path, tabilp_config** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new tabilp_config{tabilp::LoadConfig(path)};
  });
}

tabilp_status tabilp_config_to_json(const tabilp_config* c, char** out) {
  return Guard([&] {
    Require(c != nullptr && out != nullptr, "null argument");
    *out = Dup(tabilp::ConfigToJson(c->config));
  });
}

tabilp_status tabilp_config_with_time_limit(const tabilp_config* c, double seconds,
                                            tabilp_config** out) {
  return Guard([&] {
    Require(out != nullptr, "output pointer is null");
    auto copy = std::make_unique<tabilp_config>(tabilp_config{Config(c)});
    copy->config.reason.time_limit_seconds =
        seconds > 0.0 ? seconds : std::numeric_limits<double>::infinity();
    copy->config.Validate();
    *out = copy.release();
  });
}

uint64_t tabilp_config_seed(const tabilp_config* c) { return Config(c).seed; }

void tabilp_config_free(tabilp_config* c) { delete c; }

tabilp_status tabilp_tables_load(const char* path, tabilp_tables** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new tabilp_tables{tabilp::LoadTables(path)};
  });
}

size_t tabilp_tables_count(const tabilp_tables* t) { return t ? t->tables.size() : 0; }

void tabilp_tables_free(tabilp_tables* t) { delete t; }

tabilp_status tabilp_questions_load(const char* path, tabilp_questions** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new tabilp_questions{tabilp::LoadQuestions(path)};
  });
}

size_t tabilp_questions_count(const tabilp_questions* q) { return q ? q->questions.size() : 0; }

const char* tabilp_questions_id(const tabilp_questions* q, size_t index) {
  if (!q || index >= q->questions.size()) return nullptr;
  return q->questions[index].id.c_str();
}

size_t tabilp_questions_num_options(const tabilp_questions* q, size_t index) {
  if (!q || index >= q->questions.size()) return 0;
  return q->questions[index].options.size();
}

size_t tabilp_questions_num_constituents(const tabilp_questions* q, size_t index) {
  if (!q || index >= q->questions.size()) return 0;
  return q->questions[index].constituents.size();
}

int64_t tabilp_questions_gold(const tabilp_questions* q, size_t index) {
  if (!q || index >= q->questions.size() || !q->questions[index].gold) return -1;
  return static_cast<int64_t>(*q->questions[index].gold);
}

void tabilp_questions_free(tabilp_questions* q) { delete q; }

tabilp_status tabilp_corpus_load(const char* path, size_t window, tabilp_corpus** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new tabilp_corpus(tabilp::BuildCorpus(path, window));
  });
}

void tabilp_corpus_free(tabilp_corpus* c) { delete c; }

tabilp_status tabilp_ir_create(const tabilp_corpus* corpus, const tabilp_config* config,
                               tabilp_ir** out) {
  return Guard([&] {
    Require(corpus != nullptr && out != nullptr, "null argument");
    *out = new tabilp_ir(tabilp::IrIndex(corpus->corpus, Config(config).ir));
  });
}

tabilp_status tabilp_ir_score(const tabilp_ir* ir, const tabilp_questions* q, size_t index,
                              size_t option, const size_t* terms, size_t num_terms, double* out) {
  return Guard([&] {
    Require(ir != nullptr && out != nullptr, "null argument");
    const tabilp::QuestionInstance& question = Question(q, index);
    if (terms) {
      const std::vector<std::size_t> t(terms, terms + num_terms);
      *out = ir->index.Score(question, option, &t);
    } else {
      *out = ir->index.Score(question, option);
    }
  });
}

void tabilp_ir_free(tabilp_ir* ir) { delete ir; }

tabilp_status tabilp_scorer_create(const char* name, const char* train_path,
                                   const char* score_path, const tabilp_corpus* corpus,
                                   const tabilp_config* config, tabilp_scorer** out) {
  return Guard([&] {
    Require(name != nullptr && out != nullptr, "null argument");
    const std::string n = name;
    if (n == "file") {
      Require(score_path != nullptr, "the file scorer needs a score file");
      *out = new tabilp_scorer{
          std::make_shared<tabilp::FileScorer>(tabilp::LoadScoreFile(score_path))};
      return;
    }
    std::optional<tabilp::EtDataset> train;
    if (train_path) train = tabilp::LoadEtDataset(train_path);
    const tabilp::RunConfig& c = Config(config);
    *out = new tabilp_scorer{tabilp::MakeTermScorer(n, train ? &*train : nullptr,
                                                    corpus ? &corpus->corpus : nullptr,
                                                    c.essential.pmi_skip, c.seed)};
  });
}

tabilp_status tabilp_scorer_profile(const tabilp_scorer* s, const tabilp_questions* q,
                                    size_t index, double* out, size_t capacity) {
  return Guard([&] {
    Require(s != nullptr && out != nullptr, "null argument");
    const tabilp::QuestionInstance& question = Question(q, index);
    Require(capacity >= question.constituents.size(), "output buffer too small");
    const tabilp::EssentialityProfile p = tabilp::ScoreQuestion(*s->scorer, question);
    std::copy(p.scores.begin(), p.scores.end(), out);
  });
}

void tabilp_scorer_free(tabilp_scorer* s) { delete s; }

namespace {

void CopyMetrics(const tabilp::EtMetrics& m, tabilp_et_metrics* out) {
  out->auc = m.auc;
  out->accuracy = m.accuracy;
  out->precision = m.precision;
  out->recall = m.recall;
  out->f1 = m.f1;
  out->map = m.map;
  out->terms = m.terms;
  out->questions = m.questions;
}

}  // namespace

tabilp_status tabilp_scorer_evaluate(const tabilp_scorer* s, const char* dataset_path,
                                     const tabilp_questions* q, double threshold,
                                     char** scores_jsonl, tabilp_et_metrics* metrics) {
  return Guard([&] {
    Require(s != nullptr && dataset_path != nullptr, "null argument");
    const tabilp::EtDataset data = tabilp::LoadEtDataset(dataset_path);
    std::map<std::string, const tabilp::QuestionInstance*> by_id;
    if (q) {
      for (const auto& question : q->questions) by_id[question.id] = &question;
    }
    std::vector<tabilp::EtRecord> scored;
    std::vector<tabilp::ScoredTerm> items;
    for (const tabilp::EtRecord& r : data.records) {
      tabilp::QuestionInstance context;
      auto it = by_id.find(r.question_id);
      if (it != by_id.end()) {
        context = *it->second;
      } else {
        context.id = r.question_id;
        context.text = r.question;
      }
      tabilp::EtRecord out = r;
      out.score = s->scorer->Score(r.term, context);
      items.push_back({r.question_id, out.score, r.label()});
      scored.push_back(std::move(out));
    }
    const tabilp::EtMetrics m = tabilp::ComputeEtMetrics(items, threshold);
    if (scores_jsonl) *scores_jsonl = Dup(tabilp::SerializeScoreFile(scored));
    if (metrics) CopyMetrics(m, metrics);
  });
}

tabilp_status tabilp_et_metrics_compute(const char* const* question_ids, const double* scores,
                                        const int* labels, size_t n, double threshold,
                                        tabilp_et_metrics* out) {
  return Guard([&] {
    Require(out != nullptr, "output pointer is null");
    Require(n == 0 || (question_ids && scores && labels), "null input arrays");
    std::vector<tabilp::ScoredTerm> items;
    for (size_t i = 0; i < n; ++i) {
      Require(question_ids[i] != nullptr, "null question id");
      Require(labels[i] == 0 || labels[i] == 1, "labels must be 0 or 1");
      items.push_back({question_ids[i], scores[i], labels[i] == 1});
    }
    CopyMetrics(tabilp::ComputeEtMetrics(items, threshold), out);
  });
}

namespace {

tabilp::TableIlp BuildProblem(const tabilp_tables* t, const tabilp::QuestionInstance& q,
                              const tabilp::RunConfig& config, const tabilp_answer_options* o) {
  Require(t != nullptr, "tables handle is null");
  tabilp::ValidateQuestion(q);
  tabilp::TableIlp model = tabilp::BuildModel(t->tables, q, config.reason.model);
  if (!o) return model;
  switch (o->mode) {
    case TABILP_ET_NONE: break;
    case TABILP_ET_FORCE:
      tabilp::AddEssentialForcing(model, Profile(o, q), o->xi);
      break;
    case TABILP_ET_CASCADE_BIG_M:
      tabilp::BuildCascadeExtension(model, Profile(o, q), Thresholds(o));
      break;
    case TABILP_ET_CASCADE:
      tabilp::ThrowInvalid("a sequential cascade has no single program");
    default:
      tabilp::ThrowInvalid("unknown essential-term mode");
  }
  return model;
}

std::string Scorecard(const tabilp::AnswerResult& r, const tabilp::QuestionInstance& q,
                      const tabilp_answer_options* o) {
  tabilp::SolverScorecard card;
  card.question_id = q.id;
  card.gold = q.gold;
  card.num_options = q.options.size();
  tabilp::SolverScores ilp{"tableilp", {}, {}};
  for (std::size_t m = 0; m < card.num_options; ++m) {
    const bool have = m < r.option_feasible.size() && r.option_feasible[m];
    ilp.scores.push_back(have ? r.confidence[m] : 0.0);
    ilp.missing.push_back(!have);
    std::optional<tabilp::TableIlpFeatureVector> f;
    if (m < r.option_support.size() && r.option_support[m]) {
      f = tabilp::TableIlpFeatures(*r.option_support[m], q.constituents.size(), r.num_variables,
                                   r.num_constraints);
    }
    card.tableilp_support.push_back(f);
  }
  card.solvers.push_back(std::move(ilp));
  if (o && o->ir) {
    tabilp::SolverScores ir{"ir", {}, {}};
    std::optional<std::vector<std::size_t>> terms;
    if (o->mode == TABILP_ET_FORCE) terms = tabilp::Omega(Profile(o, q), o->xi);
    for (std::size_t m = 0; m < card.num_options; ++m) {
      ir.scores.push_back(o->ir->index.Score(q, m, terms ? &*terms : nullptr));
      ir.missing.push_back(false);
    }
    card.solvers.push_back(std::move(ir));
  }
  return tabilp::ScorecardToJson(card);
}

}  // namespace

tabilp_status tabilp_answer(const tabilp_tables* t, const tabilp_questions* q, size_t index,
                            const tabilp_config* config, const tabilp_answer_options* options,
                            char** answer_json, char** scorecard_json) {
  return Guard([&] {
    Require(t != nullptr && answer_json != nullptr, "null argument");
    const tabilp::QuestionInstance& question = Question(q, index);
    const tabilp::RunConfig& c = Config(config);
    const tabilp_et_mode mode = options ? options->mode : TABILP_ET_NONE;
    tabilp::AnswerResult r;
    switch (mode) {
      case TABILP_ET_NONE:
        r = tabilp::Answer(t->tables, question, c.reason);
        break;
      case TABILP_ET_FORCE:
        r = tabilp::AnswerModel(BuildProblem(t, question, c, options), c.reason);
        break;
      case TABILP_ET_CASCADE:
        r = tabilp::RunCascade(t->tables, question, Profile(options, question), Thresholds(options),
                               c.reason);
        break;
      case TABILP_ET_CASCADE_BIG_M:
        r = tabilp::AnswerCascadeExtension(t->tables, question, Profile(options, question),
                                           Thresholds(options), c.reason);
        break;
      default:
        tabilp::ThrowInvalid("unknown essential-term mode");
    }
    const bool support = options ? options->include_support != 0 : true;
    std::string card;
    if (scorecard_json) card = Scorecard(r, question, options);
    *answer_json = Dup(tabilp::AnswerToJson(r, question, support));
    if (scorecard_json) *scorecard_json = Dup(card);
  });
}

double tabilp_eval_score(const size_t* chosen, size_t k, size_t gold) {
  if (!chosen || k == 0) return 0.0;
  for (size_t i = 0; i < k; ++i) {
    if (chosen[i] == gold) return 1.0 / static_cast<double>(k);
  }
  return 0.0;
}

tabilp_status tabilp_problem_build(const tabilp_tables* t, const tabilp_questions* q, size_t index,
                                   const tabilp_config* config,
                                   const tabilp_answer_options* options, tabilp_problem** out) {
  return Guard([&] {
    Require(out != nullptr, "output pointer is null");
    tabilp::TableIlp model = BuildProblem(t, Question(q, index), Config(config), options);
    *out = new tabilp_problem{std::move(model.problem)};
  });
}

tabilp_status tabilp_problem_read_mps(const char* path, tabilp_problem** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new tabilp_problem{tabilp::ReadMps(path)};
  });
}

tabilp_status tabilp_problem_write_mps(const tabilp_problem* p, const char* path) {
  return Guard([&] {
    Require(p != nullptr && path != nullptr, "null argument");
    tabilp::WriteMps(p->problem, path);
  });
}

size_t tabilp_problem_num_variables(const tabilp_problem* p) {
  return p ? p->problem.num_variables() : 0;
}

size_t tabilp_problem_num_constraints(const tabilp_problem* p) {
  return p ? p->problem.num_constraints() : 0;
}

tabilp_status tabilp_problem_solve(const tabilp_problem* p, const tabilp_config* config,
                                   tabilp_solve_result* out, uint8_t* assignment,
                                   size_t capacity) {
  return Guard([&] {
    Require(p != nullptr && out != nullptr, "null argument");
    Require(!assignment || capacity >= p->problem.num_variables(), "assignment buffer too small");
    tabilp::SolverOptions opts = Config(config).reason.Solver();
    opts.branch_priority = tabilp::BranchPriority(p->problem);
    const tabilp::Solution s = tabilp::Solve(p->problem, opts);
    switch (s.status) {
      case tabilp::SolveStatus::kOptimal: out->status = TABILP_SOLVE_OPTIMAL; break;
      case tabilp::SolveStatus::kInfeasible: out->status = TABILP_SOLVE_INFEASIBLE; break;
      case tabilp::SolveStatus::kTimeout: out->status = TABILP_SOLVE_TIMEOUT; break;
    }
    out->objective = s.objective;
    out->nodes = s.stats.nodes;
    out->lp_iterations = s.stats.lp_iterations;
    out->wall_seconds = s.stats.wall_seconds;
    if (assignment) {
      std::fill(assignment, assignment + p->problem.num_variables(), 0);
      std::copy(s.assignment.begin(), s.assignment.end(), assignment);
    }
  });
}

tabilp_status tabilp_problem_lp_relax(const tabilp_problem* p, double* bound, int* feasible) {
  return Guard([&] {
    Require(p != nullptr && bound != nullptr, "null argument");
    const tabilp::LpResult r = tabilp::LpRelax(p->problem);
    if (r.status == tabilp::LpResult::Status::kLimit) {
      tabilp::ThrowInternal("LP relaxation hit its iteration limit");
    }
    const bool ok = r.status == tabilp::LpResult::Status::kOptimal;
    *bound = ok ? r.objective : -std::numeric_limits<double>::infinity();
    if (feasible) *feasible = ok ? 1 : 0;
  });
}

void tabilp_problem_free(tabilp_problem* p) { delete p; }

tabilp_status tabilp_combiner_train(const char* scorecards_path, const tabilp_config* config,
                                    tabilp_combiner** out) {
  return Guard([&] {
    Require(scorecards_path != nullptr && out != nullptr, "null argument");
    const tabilp::TrainingSet set =
        tabilp::BuildTrainingSet(tabilp::LoadScorecards(scorecards_path));
    if (set.x.empty()) tabilp::ThrowInvalid("no scorecard carries a gold answer");
    *out = new tabilp_combiner{
        tabilp::TrainCombiner(set.x, set.y, set.features, Config(config).combiner)};
  });
}

tabilp_status tabilp_combiner_load(const char* path, tabilp_combiner** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new tabilp_combiner{tabilp::CombinerFromJson(tabilp::ReadFile(path))};
  });
}

tabilp_status tabilp_combiner_to_json(const tabilp_combiner* m, char** out) {
  return Guard([&] {
    Require(m != nullptr && out != nullptr, "null argument");
    *out = Dup(tabilp::CombinerToJson(m->model));
  });
}

tabilp_status tabilp_combiner_combine(const tabilp_combiner* m, const char* scorecard_json,
                                      char** result_json) {
  return Guard([&] {
    Require(m != nullptr && scorecard_json != nullptr && result_json != nullptr, "null argument");
    const tabilp::SolverScorecard card = tabilp::ScorecardFromJson(scorecard_json);
    const tabilp::Combination c = tabilp::Combine(m->model, card);
    Json j;
    j["id"] = card.question_id;
    j["chosen"] = std::vector<std::size_t>{c.chosen};
    j["probabilities"] = c.probabilities;
    if (card.gold) {
      j["gold"] = *card.gold;
      j["score"] = c.chosen == *card.gold ? 1.0 : 0.0;
    }
    *result_json = Dup(j.dump());
  });
}

void tabilp_combiner_free(tabilp_combiner* m) { delete m; }

}  // extern "C"
