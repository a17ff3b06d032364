// Copyright 2026 The kcpm Authors
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

#include "kcpm/kcpm.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <new>
#include <sstream>
#include <thread>

#include "kcpm/augmentation.hpp"
#include "kcpm/conformance.hpp"
#include "kcpm/dependency_mining.hpp"
#include "kcpm/event_log.hpp"
#include "kcpm/knowledge_graph.hpp"
#include "kcpm/rule_mining.hpp"
#include "kcpm/synth.hpp"
#include "kcpm/variant_analysis.hpp"

struct kcpm_log {
  kcpm::EventLog log;
};
struct kcpm_kg {
  kcpm::KnowledgeGraph kg;
};
struct kcpm_alias {
  kcpm::AliasMap alias;
};
struct kcpm_rules {
  kcpm::RuleBase rules;
};
struct kcpm_dfg {
  kcpm::DependencyGraph dfg;
};
struct kcpm_scorer {
  kcpm::TemporalScorer scorer;
};
struct kcpm_lpg {
  kcpm::LabeledPropertyGraph lpg;
};
struct kcpm_variant_model {
  kcpm::VariantModel model;
};
struct kcpm_synth_model {
  kcpm::GroundTruthModel model;
};

namespace {

thread_local std::string g_last_error;

class IoError : public kcpm::Error {
 public:
  using kcpm::Error::Error;
};

class ArgumentError : public kcpm::Error {
 public:
  using kcpm::Error::Error;
};

template <class F>
kcpm_status guard(F&& f) noexcept {
  try {
    f();
    g_last_error.clear();
    return KCPM_OK;
  } catch (const kcpm::ParseError& e) {
    g_last_error = e.what();
    return KCPM_ERR_PARSE;
  } catch (const kcpm::DataError& e) {
    g_last_error = e.what();
    return KCPM_ERR_DATA;
  } catch (const kcpm::ConfigError& e) {
    g_last_error = e.what();
    return KCPM_ERR_CONFIG;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return KCPM_ERR_IO;
  } catch (const ArgumentError& e) {
    g_last_error = e.what();
    return KCPM_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KCPM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KCPM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KCPM_ERR_INTERNAL;
  }
}

template <class T>
const T& need(const T* p, const char* what) {
  if (!p) throw ArgumentError(std::string(what) + " is NULL");
  return *p;
}

void need_out(const void* p) {
  if (!p) throw ArgumentError("output pointer is NULL");
}

std::string need_str(const char* s, const char* what) {
  if (!s) throw ArgumentError(std::string(what) + " is NULL");
  return s;
}

std::ifstream open_in(const char* path) {
  std::ifstream in(need_str(path, "path"), std::ios::binary);
  if (!in) throw IoError(std::string("cannot open ") + path);
  return in;
}

std::string slurp(const char* path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class W>
void write_file(const char* path, W&& writer) {
  std::ofstream out(need_str(path, "path"), std::ios::binary);
  if (!out) throw IoError(std::string("cannot write ") + path);
  writer(out);
  out.flush();
  if (!out) throw IoError(std::string("failed writing ") + path);
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

template <class W>
std::string render(W&& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  std::string tail = s.substr(s.size() - suffix.size());
  for (auto& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return tail == suffix;
}

const kcpm::AliasMap& alias_or_identity(const kcpm_alias* a) {
  static const kcpm::AliasMap kIdentity;
  return a ? a->alias : kIdentity;
}

const kcpm::KnowledgeGraph& kg_or_empty(const kcpm_kg* k) {
  static const kcpm::KnowledgeGraph kEmpty;
  return k ? k->kg : kEmpty;
}

kcpm::CsvMapping mapping_from_json(const char* text) {
  kcpm::CsvMapping m;
  if (!text) return m;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw kcpm::ConfigError(std::string("CSV mapping: ") + e.what());
  }
  for (const auto& [k, v] : j.items()) {
    try {
      if (k == "case_id") m.case_column = v.get<std::string>();
      else if (k == "activity") m.activity_column = v.get<std::string>();
      else if (k == "timestamp") m.timestamp_column = v.get<std::string>();
      else if (k == "resource") m.resource_column = v.is_null() ? std::nullopt : std::optional(v.get<std::string>());
      else if (k == "timestamp_format") m.timestamp_format = v.get<std::string>();
      else if (k == "attribute_columns") m.attribute_columns = v.get<std::vector<std::string>>();
      else if (k == "delimiter") {
        auto d = v.get<std::string>();
        if (d.size() != 1) throw kcpm::ConfigError("CSV delimiter must be one character");
        m.delimiter = d[0];
      } else {
        throw kcpm::ConfigError("unknown CSV mapping key '" + k + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw kcpm::ConfigError("CSV mapping key '" + k + "': " + e.what());
    }
  }
  return m;
}

kcpm::FilterMode mode_of(kcpm_filter_mode m) {
  switch (m) {
    case KCPM_FILTER_STRICT: return kcpm::FilterMode::kStrict;
    case KCPM_FILTER_PERMISSIVE: return kcpm::FilterMode::kPermissive;
  }
  throw ArgumentError("unknown filter mode");
}

template <class H, class V>
H* make(V&& v) {
  return new H{std::forward<V>(v)};
}

}  // namespace

extern "C" {

const char* kcpm_version(void) { return "0.3.0"; }

const char* kcpm_last_error(void) { return g_last_error.c_str(); }

const char* kcpm_status_name(kcpm_status s) {
  switch (s) {
    case KCPM_OK: return "ok";
    case KCPM_ERR_ARGUMENT: return "invalid argument";
    case KCPM_ERR_PARSE: return "parse error";
    case KCPM_ERR_DATA: return "data error";
    case KCPM_ERR_CONFIG: return "configuration error";
    case KCPM_ERR_IO: return "i/o error";
    case KCPM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void kcpm_string_free(char* s) { std::free(s); }

void kcpm_set_threads(unsigned n) {
  if (n == 0) {
    const char* env = std::getenv("KCPM_THREADS");
    unsigned long v = env ? std::strtoul(env, nullptr, 10) : 0;
    n = v > 0 && v <= 1024 ? static_cast<unsigned>(v) : std::max(1u, std::thread::hardware_concurrency());
  }
  kcpm::set_thread_count(n);
}

unsigned kcpm_threads(void) { return kcpm::thread_count(); }

// Event logs ---------------------------------------------------------------------

kcpm_status kcpm_log_read_xes(const char* path, int skip_malformed, kcpm_log** out) {
  return guard([&] {
    need_out(out);
    auto in = open_in(path);
    kcpm::XesOptions opt;
    if (skip_malformed) opt.on_malformed = kcpm::MalformedEventPolicy::kSkip;
    *out = make<kcpm_log>(kcpm::parse_xes(in, opt));
  });
}

kcpm_status kcpm_log_read_csv(const char* path, const char* mapping_json, kcpm_log** out) {
  return guard([&] {
    need_out(out);
    auto mapping = mapping_from_json(mapping_json);
    auto in = open_in(path);
    *out = make<kcpm_log>(kcpm::parse_csv(in, mapping));
  });
}

kcpm_status kcpm_log_read(const char* path, kcpm_log** out) {
  const std::string p = path ? path : "";
  if (ends_with(p, ".csv")) return kcpm_log_read_csv(path, nullptr, out);
  if (ends_with(p, ".xes")) return kcpm_log_read_xes(path, 0, out);
  return guard([&] { throw kcpm::ConfigError("cannot tell the log format of '" + p + "' (expected .xes or .csv)"); });
}

kcpm_status kcpm_log_write_xes(const kcpm_log* log, const char* path) {
  return guard([&] {
    const auto& l = need(log, "log");
    write_file(path, [&](std::ostream& o) { kcpm::write_xes(o, l.log); });
  });
}

kcpm_status kcpm_log_write_csv(const kcpm_log* log, const char* path) {
  return guard([&] {
    const auto& l = need(log, "log");
    write_file(path, [&](std::ostream& o) { kcpm::write_csv(o, l.log); });
  });
}

kcpm_status kcpm_log_annotate(const kcpm_log* log, const char* context_csv_path, kcpm_log** out,
                              char** report_json) {
  return guard([&] {
    const auto& l = need(log, "log");
    need_out(out);
    auto in = open_in(context_csv_path);
    auto [annotated, report] = kcpm::annotate_context(l.log, kcpm::parse_context_csv(in));
    nlohmann::json j{{"matched_cases", report.matched_cases},
                     {"unmatched_cases", report.unmatched_cases},
                     {"unused_rows", report.unused_rows}};
    put(report_json, j.dump(2));
    *out = make<kcpm_log>(std::move(annotated));
  });
}

kcpm_status kcpm_log_stats_json(const kcpm_log* log, char** out) {
  return guard([&] {
    const auto& l = need(log, "log");
    need_out(out);
    put(out, kcpm::stats_to_json(kcpm::compute_stats(l.log)));
  });
}

size_t kcpm_log_case_count(const kcpm_log* log) { return log ? log->log.case_count() : 0; }

size_t kcpm_log_event_count(const kcpm_log* log) { return log ? log->log.event_count() : 0; }

void kcpm_log_free(kcpm_log* log) { delete log; }

// Knowledge graph ------------------------------------------------------------------

kcpm_status kcpm_kg_read(const char* path, kcpm_kg** out) {
  return guard([&] {
    need_out(out);
    auto in = open_in(path);
    auto fmt = ends_with(path, ".nt") ? kcpm::TripleFormat::kNTriples : kcpm::TripleFormat::kTsv;
    *out = make<kcpm_kg>(kcpm::load_triples(in, fmt));
  });
}

kcpm_status kcpm_kg_empty(kcpm_kg** out) {
  return guard([&] {
    need_out(out);
    *out = make<kcpm_kg>(kcpm::KnowledgeGraph{});
  });
}

size_t kcpm_kg_triple_count(const kcpm_kg* kg) { return kg ? kg->kg.size() : 0; }

void kcpm_kg_free(kcpm_kg* kg) { delete kg; }

kcpm_status kcpm_alias_read(const char* path, kcpm_alias** out) {
  return guard([&] {
    need_out(out);
    auto in = open_in(path);
    *out = make<kcpm_alias>(kcpm::parse_alias_csv(in));
  });
}

void kcpm_alias_free(kcpm_alias* alias) { delete alias; }

// Rules ----------------------------------------------------------------------------

kcpm_status kcpm_rules_mine(const kcpm_kg* kg, int max_body_length, uint64_t min_support,
                            double min_pca_confidence, kcpm_rules** out) {
  return guard([&] {
    const auto& k = need(kg, "kg");
    need_out(out);
    *out = make<kcpm_rules>(kcpm::mine_rules(k.kg, {max_body_length, min_support, min_pca_confidence}));
  });
}

kcpm_status kcpm_rules_empty(kcpm_rules** out) {
  return guard([&] {
    need_out(out);
    *out = make<kcpm_rules>(kcpm::RuleBase{});
  });
}

kcpm_status kcpm_rules_read(const char* path, kcpm_rules** out) {
  return guard([&] {
    need_out(out);
    auto in = open_in(path);
    *out = make<kcpm_rules>(kcpm::read_rules_jsonl(in));
  });
}

kcpm_status kcpm_rules_write(const kcpm_rules* rules, const char* path) {
  return guard([&] {
    const auto& r = need(rules, "rules");
    write_file(path, [&](std::ostream& o) { kcpm::write_rules_jsonl(o, r.rules); });
  });
}

kcpm_status kcpm_rules_text(const kcpm_rules* rules, char** out) {
  return guard([&] {
    const auto& r = need(rules, "rules");
    need_out(out);
    put(out, render([&](std::ostream& o) { kcpm::write_rules_text(o, r.rules); }));
  });
}

kcpm_status kcpm_rules_merge(const kcpm_rules* first, const kcpm_rules* second, kcpm_rules** out) {
  return guard([&] {
    const auto& a = need(first, "first");
    const auto& b = need(second, "second");
    need_out(out);
    *out = make<kcpm_rules>(a.rules.merged(b.rules));
  });
}

size_t kcpm_rules_count(const kcpm_rules* rules) { return rules ? rules->rules.size() : 0; }

kcpm_status kcpm_entails(const kcpm_rules* rules, const kcpm_kg* kg, const char* subject, const char* predicate,
                         const char* object, int* entailed, double* confidence) {
  return guard([&] {
    const auto& r = need(rules, "rules");
    const auto& k = need(kg, "kg");
    need_out(entailed);
    auto e = kcpm::entails(r.rules, k.kg,
                           {need_str(subject, "subject"), need_str(predicate, "predicate"), need_str(object, "object")});
    *entailed = e.entailed ? 1 : 0;
    if (confidence) *confidence = e.confidence;
  });
}

void kcpm_rules_free(kcpm_rules* rules) { delete rules; }

// Dependency graphs ------------------------------------------------------------------

void kcpm_mining_thresholds_default(kcpm_mining_thresholds* t) {
  if (!t) return;
  kcpm::MiningThresholds d;
  t->dependency_threshold = d.dependency_threshold;
  t->frequency_threshold = d.frequency_threshold;
  t->all_tasks_connected = d.all_tasks_connected ? 1 : 0;
  t->long_distance_threshold = -1;
}

kcpm_status kcpm_dfg_mine(const kcpm_log* log, const kcpm_mining_thresholds* t, kcpm_dfg** out) {
  return guard([&] {
    const auto& l = need(log, "log");
    need_out(out);
    kcpm::MiningThresholds th;
    if (t) {
      th.dependency_threshold = t->dependency_threshold;
      th.frequency_threshold = t->frequency_threshold;
      th.all_tasks_connected = t->all_tasks_connected != 0;
      if (t->long_distance_threshold >= 0) th.long_distance_threshold = t->long_distance_threshold;
    }
    *out = make<kcpm_dfg>(kcpm::mine_dependency_graph(l.log, th));
  });
}

kcpm_status kcpm_dfg_read_json(const char* path, kcpm_dfg** out) {
  return guard([&] {
    need_out(out);
    *out = make<kcpm_dfg>(kcpm::dependency_graph_from_json(slurp(path)));
  });
}

kcpm_status kcpm_dfg_to_json(const kcpm_dfg* dfg, char** out) {
  return guard([&] {
    const auto& d = need(dfg, "dfg");
    need_out(out);
    put(out, kcpm::dependency_graph_to_json(d.dfg));
  });
}

kcpm_status kcpm_dfg_to_dot(const kcpm_dfg* dfg, char** out) {
  return guard([&] {
    const auto& d = need(dfg, "dfg");
    need_out(out);
    put(out, render([&](std::ostream& o) { kcpm::write_dependency_dot(o, d.dfg); }));
  });
}

size_t kcpm_dfg_edge_count(const kcpm_dfg* dfg) { return dfg ? dfg->dfg.edges.size() : 0; }

kcpm_status kcpm_dfg_filter(const kcpm_dfg* dfg, const kcpm_rules* rules, const kcpm_kg* kg,
                            const kcpm_alias* alias, kcpm_filter_mode mode, kcpm_dfg** out, char** report_json) {
  return guard([&] {
    const auto& d = need(dfg, "dfg");
    const auto& r = need(rules, "rules");
    const auto& k = need(kg, "kg");
    need_out(out);
    auto [filtered, report] = kcpm::filter_dependency_graph(d.dfg, r.rules, k.kg, alias_or_identity(alias), mode_of(mode));
    put(report_json, kcpm::filter_report_to_json(report));
    *out = make<kcpm_dfg>(std::move(filtered));
  });
}

kcpm_status kcpm_dfg_filter_table(const kcpm_dfg* dfg, const kcpm_rules* rules, const kcpm_kg* kg,
                                  const kcpm_alias* alias, kcpm_filter_mode mode, char** table) {
  return guard([&] {
    const auto& d = need(dfg, "dfg");
    const auto& r = need(rules, "rules");
    const auto& k = need(kg, "kg");
    need_out(table);
    auto report =
        kcpm::filter_dependency_graph(d.dfg, r.rules, k.kg, alias_or_identity(alias), mode_of(mode)).second;
    put(table, render([&](std::ostream& o) { kcpm::write_filter_report_table(o, report); }));
  });
}

void kcpm_dfg_free(kcpm_dfg* dfg) { delete dfg; }

// Augmentation -------------------------------------------------------------------------

kcpm_status kcpm_filter_chaotic(const kcpm_log* log, const kcpm_rules* rules, const kcpm_kg* kg,
                                const kcpm_alias* alias, int strict_ordering, kcpm_log** out, char** report_json) {
  return guard([&] {
    const auto& l = need(log, "log");
    const auto& r = need(rules, "rules");
    const auto& k = need(kg, "kg");
    need_out(out);
    kcpm::ChaoticFilterOptions opt;
    opt.strict_ordering = strict_ordering != 0;
    auto [filtered, report] = kcpm::filter_chaotic_events(l.log, r.rules, k.kg, alias_or_identity(alias), opt);
    put(report_json, kcpm::augmentation_report_to_json(report));
    *out = make<kcpm_log>(std::move(filtered));
  });
}

void kcpm_scorer_params_default(kcpm_scorer_params* p) {
  if (!p) return;
  kcpm::ScorerParams d;
  *p = {d.dimension, d.margin, d.learning_rate, d.epochs, d.negatives, d.seed, d.time_buckets};
}

kcpm_status kcpm_scorer_train(const kcpm_log* log, const kcpm_kg* kg, const kcpm_scorer_params* p,
                              kcpm_scorer** out) {
  return guard([&] {
    const auto& l = need(log, "log");
    need_out(out);
    kcpm::ScorerParams sp;
    if (p) sp = {p->dimension, p->margin, p->learning_rate, p->epochs, p->negatives, p->seed, p->time_buckets};
    *out = make<kcpm_scorer>(kcpm::train_temporal_scorer(l.log, kg_or_empty(kg), sp));
  });
}

kcpm_status kcpm_scorer_save(const kcpm_scorer* s, const char* path) {
  return guard([&] {
    const auto& sc = need(s, "scorer");
    write_file(path, [&](std::ostream& o) { o << sc.scorer.to_json() << '\n'; });
  });
}

kcpm_status kcpm_scorer_load(const char* path, kcpm_scorer** out) {
  return guard([&] {
    need_out(out);
    *out = make<kcpm_scorer>(kcpm::TemporalScorer::from_json(slurp(path)));
  });
}

kcpm_status kcpm_scorer_degree(const kcpm_scorer* s, const char* a, const char* b, const char* timestamp,
                               double* degree) {
  return guard([&] {
    const auto& sc = need(s, "scorer");
    need_out(degree);
    auto t = kcpm::parse_iso8601(need_str(timestamp, "timestamp"));
    if (!t) throw ArgumentError(std::string("bad timestamp '") + timestamp + "'");
    *degree = kcpm::directly_follows_degree(sc.scorer, need_str(a, "a"), need_str(b, "b"), *t);
  });
}

void kcpm_scorer_free(kcpm_scorer* s) { delete s; }

kcpm_status kcpm_infer_missing(const kcpm_log* log, const kcpm_rules* rules, const kcpm_kg* kg,
                               const kcpm_scorer* scorer, double theta, const kcpm_alias* alias, kcpm_log** out,
                               char** report_json) {
  return guard([&] {
    const auto& l = need(log, "log");
    const auto& r = need(rules, "rules");
    const auto& k = need(kg, "kg");
    need_out(out);
    auto [augmented, report] = kcpm::infer_missing_events(l.log, r.rules, k.kg, scorer ? &scorer->scorer : nullptr,
                                                          theta, alias_or_identity(alias));
    put(report_json, kcpm::augmentation_report_to_json(report));
    *out = make<kcpm_log>(std::move(augmented));
  });
}

kcpm_status kcpm_guideline_latency(const kcpm_log* log, const char* from, const char* to, int64_t limit_ms,
                                   double* fraction) {
  return guard([&] {
    const auto& l = need(log, "log");
    need_out(fraction);
    *fraction = kcpm::check_guideline_latency(l.log, need_str(from, "from"), need_str(to, "to"),
                                              kcpm::Duration(limit_ms));
  });
}

// LPG and variants ---------------------------------------------------------------------

kcpm_status kcpm_lpg_build(const kcpm_log* log, const kcpm_kg* kg, const kcpm_alias* alias,
                           const char* const* attribute_keys, size_t n_keys, kcpm_lpg** out) {
  return guard([&] {
    const auto& l = need(log, "log");
    need_out(out);
    kcpm::LpgOptions opt;
    opt.aliases = alias_or_identity(alias);
    for (size_t i = 0; i < n_keys; ++i) opt.attribute_nodes.push_back(need_str(attribute_keys[i], "attribute key"));
    *out = make<kcpm_lpg>(kcpm::build_lpg(l.log, kg_or_empty(kg), opt));
  });
}

kcpm_status kcpm_lpg_export(const kcpm_lpg* g, const char* format, char** out) {
  return guard([&] {
    const auto& lg = need(g, "lpg").lpg;
    need_out(out);
    const std::string f = need_str(format, "format");
    if (f == "graphml") put(out, render([&](std::ostream& o) { kcpm::write_graphml(o, lg); }));
    else if (f == "dot") put(out, render([&](std::ostream& o) { kcpm::write_lpg_dot(o, lg); }));
    else if (f == "nodes-csv") put(out, render([&](std::ostream& o) { kcpm::write_lpg_nodes_csv(o, lg); }));
    else if (f == "edges-csv") put(out, render([&](std::ostream& o) { kcpm::write_lpg_edges_csv(o, lg); }));
    else throw ArgumentError("unknown graph export format '" + f + "'");
  });
}

size_t kcpm_lpg_node_count(const kcpm_lpg* g) { return g ? g->lpg.nodes().size() : 0; }

size_t kcpm_lpg_edge_count(const kcpm_lpg* g) { return g ? g->lpg.edges().size() : 0; }

void kcpm_lpg_free(kcpm_lpg* g) { delete g; }

void kcpm_variant_params_default(kcpm_variant_params* p) {
  if (!p) return;
  kcpm::VariantParams d;
  *p = {d.dimension, d.margin, d.learning_rate, d.epochs, d.negatives, d.seed, d.classification_weight};
}

kcpm_status kcpm_variant_train(const kcpm_lpg* g, const char* labels_csv_path, const kcpm_variant_params* p,
                               kcpm_variant_model** out) {
  return guard([&] {
    const auto& lg = need(g, "lpg");
    need_out(out);
    auto in = open_in(labels_csv_path);
    auto labels = kcpm::parse_labels_csv(in);
    kcpm::VariantParams vp;
    if (p)
      vp = {p->dimension, p->margin, p->learning_rate, p->epochs, p->negatives, p->seed, p->classification_weight};
    *out = make<kcpm_variant_model>(kcpm::train_variant_model(lg.lpg, labels, vp));
  });
}

kcpm_status kcpm_variant_save(const kcpm_variant_model* m, const char* path) {
  return guard([&] {
    const auto& vm = need(m, "model");
    write_file(path, [&](std::ostream& o) { o << vm.model.to_json() << '\n'; });
  });
}

kcpm_status kcpm_variant_load(const char* path, kcpm_variant_model** out) {
  return guard([&] {
    need_out(out);
    *out = make<kcpm_variant_model>(kcpm::VariantModel::from_json(slurp(path)));
  });
}

kcpm_status kcpm_variant_score(const kcpm_variant_model* m, const kcpm_lpg* g, const char* case_id, char** json) {
  return guard([&] {
    const auto& vm = need(m, "model");
    const auto& lg = need(g, "lpg");
    need_out(json);
    auto s = kcpm::score_trace(vm.model, lg.lpg, need_str(case_id, "case_id"));
    put(json, nlohmann::json{{"scores", s.scores}, {"prior_assigned", s.from_prior}}.dump(2));
  });
}

kcpm_status kcpm_variant_classify(const kcpm_variant_model* m, const kcpm_lpg* g, const kcpm_log* log,
                                  char** partition_json, char** partition_csv) {
  return guard([&] {
    const auto& vm = need(m, "model");
    const auto& lg = need(g, "lpg");
    const auto& l = need(log, "log");
    auto p = kcpm::classify_log(vm.model, lg.lpg, l.log);
    std::string js = kcpm::partition_to_json(p);
    std::string cs = render([&](std::ostream& o) { kcpm::write_partition_csv(o, p); });
    put(partition_json, js);
    put(partition_csv, cs);
  });
}

void kcpm_variant_free(kcpm_variant_model* m) { delete m; }

// Conformance ------------------------------------------------------------------------

kcpm_status kcpm_conformance(const kcpm_log* log, const kcpm_dfg* model, char** report_json) {
  return guard([&] {
    const auto& l = need(log, "log");
    const auto& d = need(model, "model");
    need_out(report_json);
    put(report_json,
        kcpm::conformance_to_json(kcpm::conformance(kcpm::footprint_of_log(l.log), kcpm::footprint_of_model(d.dfg))));
  });
}

kcpm_status kcpm_conformance_values(const kcpm_log* log, const kcpm_dfg* model, double* fitness, double* precision,
                                    double* f_score) {
  return guard([&] {
    const auto& l = need(log, "log");
    const auto& d = need(model, "model");
    auto r = kcpm::conformance(kcpm::footprint_of_log(l.log), kcpm::footprint_of_model(d.dfg));
    if (fitness) *fitness = r.fitness;
    if (precision) *precision = r.precision;
    if (f_score) *f_score = r.f_score;
  });
}

double kcpm_f_score(double fitness, double precision) { return kcpm::f_score(fitness, precision); }

kcpm_status kcpm_conformance_table(size_t n_rows, const char* const* labels, const double* fitness,
                                   const double* precision, char** table) {
  return guard([&] {
    need_out(table);
    if (n_rows && (!labels || !fitness || !precision)) throw ArgumentError("table columns are NULL");
    std::vector<kcpm::TableRow> rows;
    for (size_t i = 0; i < n_rows; ++i) {
      kcpm::ConformanceReport r;
      r.fitness = fitness[i];
      r.precision = precision[i];
      r.f_score = kcpm::f_score(r.fitness, r.precision);
      rows.push_back({need_str(labels[i], "label"), r});
    }
    put(table, render([&](std::ostream& o) { kcpm::write_conformance_table(o, rows); }));
  });
}

kcpm_status kcpm_footprint_log(const kcpm_log* log, int csv, char** out) {
  return guard([&] {
    const auto& l = need(log, "log");
    need_out(out);
    auto fp = kcpm::footprint_of_log(l.log);
    put(out, render([&](std::ostream& o) {
          if (csv) kcpm::write_footprint_csv(o, fp);
          else kcpm::write_footprint_table(o, fp);
        }));
  });
}

kcpm_status kcpm_footprint_dfg(const kcpm_dfg* dfg, int csv, char** out) {
  return guard([&] {
    const auto& d = need(dfg, "dfg");
    need_out(out);
    auto fp = kcpm::footprint_of_model(d.dfg);
    put(out, render([&](std::ostream& o) {
          if (csv) kcpm::write_footprint_csv(o, fp);
          else kcpm::write_footprint_table(o, fp);
        }));
  });
}

// Synthetic data ------------------------------------------------------------------------

kcpm_status kcpm_synth_model_read(const char* path, kcpm_synth_model** out) {
  return guard([&] {
    need_out(out);
    *out = make<kcpm_synth_model>(kcpm::ground_truth_from_json(slurp(path)));
  });
}

kcpm_status kcpm_synth_model_dfg(const kcpm_synth_model* m, kcpm_dfg** out) {
  return guard([&] {
    const auto& sm = need(m, "model");
    need_out(out);
    *out = make<kcpm_dfg>(sm.model.graph());
  });
}

kcpm_status kcpm_synth_simulate(const kcpm_synth_model* m, size_t n_cases, uint64_t seed, kcpm_log** out) {
  return guard([&] {
    const auto& sm = need(m, "model");
    need_out(out);
    *out = make<kcpm_log>(kcpm::simulate(sm.model, n_cases, seed));
  });
}

kcpm_status kcpm_synth_corrupt(const kcpm_log* log, double drop_rate, double noise_rate,
                               const char* const* noise_alphabet, size_t n_noise, uint64_t seed, kcpm_log** out) {
  return guard([&] {
    const auto& l = need(log, "log");
    need_out(out);
    kcpm::CorruptionSpec spec;
    spec.drop_rate = drop_rate;
    spec.noise_rate = noise_rate;
    spec.seed = seed;
    for (size_t i = 0; i < n_noise; ++i) spec.noise_alphabet.insert(need_str(noise_alphabet[i], "noise activity"));
    *out = make<kcpm_log>(kcpm::corrupt(l.log, spec));
  });
}

void kcpm_synth_model_free(kcpm_synth_model* m) { delete m; }

}  // extern "C"
