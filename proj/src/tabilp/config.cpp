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

#include "tabilp/config.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "json.hpp"
#include "tabilp/error.hpp"

namespace tabilp {
namespace {

using Json = nlohmann::ordered_json;

// Binds the keys of one JSON object to fields; reading rejects unknown keys
// and wrong types, writing emits every bound field.
class Section {
 public:
  explicit Section(std::string name) : name_(std::move(name)) {}

  Section& Real(const std::string& key, double* v) {
    fields_.push_back({key,
                       [this, key, v](const Json& j) {
                         if (!j.is_number()) Fail(key, "a number");
                         *v = j.get<double>();
                       },
                       [v]() { return Json(*v); }});
    return *this;
  }
  Section& Count(const std::string& key, std::size_t* v) {
    fields_.push_back({key,
                       [this, key, v](const Json& j) {
                         if (!j.is_number_unsigned()) Fail(key, "a non-negative integer");
                         *v = j.get<std::size_t>();
                       },
                       [v]() { return Json(*v); }});
    return *this;
  }
  Section& Flag(const std::string& key, bool* v) {
    fields_.push_back({key,
                       [this, key, v](const Json& j) {
                         if (!j.is_boolean()) Fail(key, "a boolean");
                         *v = j.get<bool>();
                       },
                       [v]() { return Json(*v); }});
    return *this;
  }
  Section& Text(const std::string& key, std::string* v) {
    fields_.push_back({key,
                       [this, key, v](const Json& j) {
                         if (!j.is_string()) Fail(key, "a string");
                         *v = j.get<std::string>();
                       },
                       [v]() { return Json(*v); }});
    return *this;
  }
  Section& Custom(const std::string& key, std::function<void(const Json&)> read,
                  std::function<Json()> write) {
    fields_.push_back({key, std::move(read), std::move(write)});
    return *this;
  }

  void Read(const Json& obj) const {
    if (!obj.is_object()) ThrowInvalid("config section '" + name_ + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
      const Field* f = nullptr;
      for (const Field& cand : fields_) {
        if (cand.key == key) f = &cand;
      }
      if (!f) ThrowInvalid("unknown config key '" + name_ + "." + key + "'");
      f->read(value);
    }
  }

  Json Write() const {
    Json out = Json::object();
    for (const Field& f : fields_) out[f.key] = f.write();
    return out;
  }

  [[noreturn]] void Fail(const std::string& key, const char* what) const {
    ThrowInvalid("config key '" + name_ + "." + key + "' must be " + what);
  }

 private:
  struct Field {
    std::string key;
    std::function<void(const Json&)> read;
    std::function<Json()> write;
  };
  std::string name_;
  std::vector<Field> fields_;
};

std::map<std::string, Section> Sections(RunConfig& c) {
  std::map<std::string, Section> s;
  AlignmentConfig& a = c.reason.model.alignment;
  s.emplace("alignment", Section("alignment"));
  s.at("alignment")
      .Real("min_cell_cell", &a.min_cell_cell)
      .Real("min_title_title", &a.min_title_title)
      .Real("min_cell_qcons", &a.min_cell_qcons)
      .Real("min_title_qcons", &a.min_title_qcons)
      .Real("min_cell_qchoice", &a.min_cell_qchoice)
      .Real("min_title_qchoice", &a.min_title_qchoice)
      .Real("min_cell_qchoice_cons", &a.min_cell_qchoice_cons)
      .Real("min_title_qchoice_cons", &a.min_title_qchoice_cons)
      .Real("min_active_cell_aggr", &a.min_active_cell_aggr)
      .Real("min_active_title_aggr", &a.min_active_title_aggr)
      .Text("scorer", &a.scorer);

  VariableWeights& w = c.reason.model.weights;
  s.emplace("weights", Section("weights"));
  s.at("weights")
      .Real("table", &w.table)
      .Real("row", &w.row)
      .Real("column", &w.column)
      .Real("header", &w.header)
      .Real("cell", &w.cell)
      .Real("constituent", &w.constituent)
      .Real("option", &w.option)
      .Real("cell_cell_inter", &w.cell_cell_inter)
      .Real("cell_cell_intra_shift", &w.cell_cell_intra_shift)
      .Real("which_term_active", &w.which_term_active)
      .Real("which_term_aligned", &w.which_term_aligned);

  ModelConstants& k = c.reason.model.constants;
  s.emplace("constants", Section("constants"));
  s.at("constants")
      .Real("max_tables_to_chain", &k.max_tables_to_chain)
      .Real("qcons_coalign_max_dist", &k.qcons_coalign_max_dist)
      .Real("which_term_span", &k.which_term_span)
      .Real("which_term_mul_boost", &k.which_term_mul_boost)
      .Real("min_alignment_which_term", &k.min_alignment_which_term)
      .Real("table_usage_penalty", &k.table_usage_penalty)
      .Real("row_usage_penalty", &k.row_usage_penalty)
      .Real("inter_table_alignment_penalty", &k.inter_table_alignment_penalty)
      .Real("max_alignments_per_qcons", &k.max_alignments_per_qcons)
      .Real("max_alignments_per_cell", &k.max_alignments_per_cell)
      .Real("relation_match_coeff", &k.relation_match_coeff)
      .Real("empty_relation_match_coeff", &k.empty_relation_match_coeff)
      .Real("no_relation_match_coeff", &k.no_relation_match_coeff)
      .Real("max_rows_per_table", &k.max_rows_per_table)
      .Real("min_active_qcons", &k.min_active_qcons)
      .Real("max_active_column_choice_alignments", &k.max_active_column_choice_alignments)
      .Real("max_active_choice_column_vars", &k.max_active_choice_column_vars)
      .Real("min_active_cells_per_row", &k.min_active_cells_per_row)
      .Real("max_active_table_choice_alignments", &k.max_active_table_choice_alignments);

  ModelOptions& o = c.reason.model.options;
  s.emplace("model_options", Section("model_options"));
  s.at("model_options")
      .Flag("relation_matching", &o.relation_matching)
      .Flag("which_terms", &o.which_terms)
      .Flag("proximity_boost", &o.proximity_boost);

  ReasonConfig& r = c.reason;
  s.emplace("reason", Section("reason"));
  s.at("reason")
      .Real("tie_tolerance", &r.tie_tolerance)
      .Real("abstain_at_or_below", &r.abstain_at_or_below)
      .Flag("option_confidences", &r.option_confidences)
      .Custom(
          "time_limit_seconds",
          [&r](const Json& j) {
            if (j.is_null()) {
              r.time_limit_seconds = std::numeric_limits<double>::infinity();
            } else if (j.is_number()) {
              r.time_limit_seconds = j.get<double>();
            } else {
              ThrowInvalid("config key 'reason.time_limit_seconds' must be a number or null");
            }
          },
          [&r]() { return std::isfinite(r.time_limit_seconds) ? Json(r.time_limit_seconds) : Json(); })
      .Custom(
          "node_limit",
          [&r](const Json& j) {
            if (j.is_null()) {
              r.node_limit = std::numeric_limits<std::size_t>::max();
            } else if (j.is_number_unsigned()) {
              r.node_limit = j.get<std::size_t>();
            } else {
              ThrowInvalid("config key 'reason.node_limit' must be a non-negative integer or null");
            }
          },
          [&r]() {
            return r.node_limit == std::numeric_limits<std::size_t>::max() ? Json() : Json(r.node_limit);
          })
      .Custom(
          "pricing",
          [&r](const Json& j) {
            const std::string v = j.is_string() ? j.get<std::string>() : "";
            if (v == "dantzig") r.pricing = Pricing::kDantzig;
            else if (v == "bland") r.pricing = Pricing::kBland;
            else ThrowInvalid("config key 'reason.pricing' must be \"dantzig\" or \"bland\"");
          },
          [&r]() { return Json(r.pricing == Pricing::kBland ? "bland" : "dantzig"); });

  EssentialConfig& e = c.essential;
  s.emplace("essential", Section("essential"));
  s.at("essential")
      .Text("scorer", &e.scorer)
      .Custom(
          "xi",
          [&e](const Json& j) {
            if (j.is_null()) e.xi.reset();
            else if (j.is_number()) e.xi = j.get<double>();
            else ThrowInvalid("config key 'essential.xi' must be a number or null");
          },
          [&e]() { return e.xi ? Json(*e.xi) : Json(); })
      .Custom(
          "cascade",
          [&e](const Json& j) {
            if (!j.is_array()) ThrowInvalid("config key 'essential.cascade' must be an array");
            e.cascade.clear();
            for (const Json& v : j) {
              if (!v.is_number()) ThrowInvalid("config key 'essential.cascade' must hold numbers");
              e.cascade.push_back(v.get<double>());
            }
          },
          [&e]() { return Json(e.cascade); })
      .Count("pmi_window", &e.pmi_window)
      .Count("pmi_skip", &e.pmi_skip);

  s.emplace("ir", Section("ir"));
  s.at("ir").Real("k1", &c.ir.k1).Real("b", &c.ir.b);

  s.emplace("combiner", Section("combiner"));
  s.at("combiner")
      .Real("learning_rate", &c.combiner.learning_rate)
      .Count("epochs", &c.combiner.epochs)
      .Real("l2", &c.combiner.l2);
  return s;
}

// Emission order of the sections.
constexpr const char* kOrder[] = {"alignment", "weights", "constants", "model_options", "reason",
                                  "essential", "ir", "combiner"};

}  // namespace

void EssentialConfig::Validate() const {
  if (scorer != "prop-surf" && scorer != "prop-lem" && scorer != "max-pmi" &&
      scorer != "sum-pmi" && scorer != "file") {
    ThrowInvalid("unknown essential scorer '" + scorer + "'");
  }
  if (xi && !(*xi >= 0.0 && *xi <= 1.0)) ThrowInvalid("xi must lie in [0, 1]");
  ValidateThresholds(cascade);
  if (pmi_window == 0) ThrowInvalid("PMI window must be >= 1");
  if (pmi_skip == 0) ThrowInvalid("PMI skip distance must be >= 1");
}

void RunConfig::Validate() const {
  reason.Validate();
  essential.Validate();
  if (!(ir.k1 >= 0.0) || !(ir.b >= 0.0 && ir.b <= 1.0)) ThrowInvalid("BM25 needs k1 >= 0 and b in [0, 1]");
  combiner.Validate();
}

RunConfig ParseConfig(std::string_view json) {
  Json j;
  try {
    j = Json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    ThrowParse(std::string("config: ") + e.what());
  }
  if (!j.is_object()) ThrowInvalid("config must be a JSON object");
  RunConfig c;
  std::map<std::string, Section> sections = Sections(c);
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") {
      if (!value.is_number_unsigned()) ThrowInvalid("config key 'seed' must be a non-negative integer");
      c.seed = value.get<std::uint64_t>();
      continue;
    }
    auto it = sections.find(key);
    if (it == sections.end()) ThrowInvalid("unknown config section '" + key + "'");
    it->second.Read(value);
  }
  c.Validate();
  return c;
}

RunConfig LoadConfig(const std::filesystem::path& path) { return ParseConfig(ReadFile(path)); }

std::string ConfigToJson(const RunConfig& config) {
  RunConfig copy = config;
  std::map<std::string, Section> sections = Sections(copy);
  Json j = Json::object();
  for (const char* name : kOrder) j[name] = sections.at(name).Write();
  j["seed"] = copy.seed;
  return j.dump(2) + "\n";
}

}  // namespace tabilp
