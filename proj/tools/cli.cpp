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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <type_traits>

#include "config.hpp"
#include "kcpm/kcpm.h"
#include "manifest.hpp"

namespace kcpm::cli {

namespace {

using json = nlohmann::ordered_json;

// Handles ------------------------------------------------------------------

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <class T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Log = Handle<kcpm_log, kcpm_log_free>;
using Kg = Handle<kcpm_kg, kcpm_kg_free>;
using Alias = Handle<kcpm_alias, kcpm_alias_free>;
using Rules = Handle<kcpm_rules, kcpm_rules_free>;
using Dfg = Handle<kcpm_dfg, kcpm_dfg_free>;
using Scorer = Handle<kcpm_scorer, kcpm_scorer_free>;
using Lpg = Handle<kcpm_lpg, kcpm_lpg_free>;
using VariantModel = Handle<kcpm_variant_model, kcpm_variant_free>;
using SynthModel = Handle<kcpm_synth_model, kcpm_synth_model_free>;

/// Library failure carrying its status.
struct ApiError : std::runtime_error {
  ApiError(kcpm_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  kcpm_status status;
};

void check(kcpm_status s) {
  if (s != KCPM_OK) throw ApiError(s, kcpm_last_error());
}

/// Owns a string returned by the library.
class CStr {
 public:
  CStr() = default;
  CStr(const CStr&) = delete;
  CStr& operator=(const CStr&) = delete;
  ~CStr() { kcpm_string_free(p_); }
  char** out() { return &p_; }
  std::string str() const { return p_ ? std::string(p_) : std::string(); }
  json parsed() const { return json::parse(str()); }

 private:
  char* p_ = nullptr;
};

template <class H, class F, class... A>
H make(F f, A&&... args) {
  typename H::pointer p = nullptr;
  check(f(std::forward<A>(args)..., &p));
  return H(p);
}

// Run context --------------------------------------------------------------

class Run {
 public:
  Run(std::string subcommand, Settings s, std::ostream& out) : s_(std::move(s)), out_(out) {
    manifest_.subcommand = std::move(subcommand);
    manifest_.seed = s_.seed;
    manifest_.settings = canonical_settings(s_);
  }

  const Settings& s() const { return s_; }
  std::ostream& out() { return out_; }

  const std::string& require(const std::string& value, const char* flag) const {
    if (value.empty()) throw UsageError(std::string(flag) + " is required");
    return value;
  }

  const std::string& input(const std::string& path) {
    if (std::find(manifest_.inputs.begin(), manifest_.inputs.end(), path) == manifest_.inputs.end())
      manifest_.inputs.push_back(path);
    return path;
  }

  std::string path_of(const std::string& name) {
    std::filesystem::create_directories(s_.out);
    return s_.out + "/" + name;
  }

  /// Registers `name` as produced by the library writing to path_of(name).
  void produced(const std::string& name) {
    if (std::find(manifest_.outputs.begin(), manifest_.outputs.end(), name) == manifest_.outputs.end())
      manifest_.outputs.push_back(name);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(path_of(name), std::ios::binary);
    f << content;
    if (!f) throw ApiError(KCPM_ERR_IO, "cannot write " + path_of(name));
    produced(name);
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void finish() {
    std::filesystem::create_directories(s_.out);
    write_manifest(s_.out, manifest_);
  }

  // Loaders ----------------------------------------------------------------

  /// Reads --log, applying --mapping for CSV and --context when given.
  /// The annotation report lands in `annotation` when a context is used.
  Log log(json* annotation = nullptr) {
    const std::string& path = input(require(s_.log, "--log"));
    Log log;
    if (!s_.mapping.empty()) {
      std::ifstream in(input(s_.mapping), std::ios::binary);
      if (!in) throw ApiError(KCPM_ERR_IO, "cannot open " + s_.mapping);
      std::stringstream ss;
      ss << in.rdbuf();
      log = make<Log>(kcpm_log_read_csv, path.c_str(), ss.str().c_str());
    } else {
      log = make<Log>(kcpm_log_read, path.c_str());
    }
    if (!s_.context.empty()) {
      CStr report;
      kcpm_log* annotated = nullptr;
      check(kcpm_log_annotate(log.get(), input(s_.context).c_str(), &annotated, report.out()));
      log.reset(annotated);
      if (annotation) *annotation = report.parsed();
    }
    return log;
  }

  Kg kg() {
    if (s_.kg.empty()) return make<Kg>(kcpm_kg_empty);
    return make<Kg>(kcpm_kg_read, input(s_.kg).c_str());
  }

  Alias alias() {
    if (s_.alias.empty()) return nullptr;
    return make<Alias>(kcpm_alias_read, input(s_.alias).c_str());
  }

  /// Hand-written rules from --rules, merged with rules mined from `kg`
  /// when mining is on. Hand-written rules win on equal ids.
  Rules rules(const kcpm_kg* kg) {
    Rules hand;
    if (!s_.rules.empty()) hand = make<Rules>(kcpm_rules_read, input(s_.rules).c_str());
    Rules mined;
    if (s_.mine && kcpm_kg_triple_count(kg) > 0)
      mined = make<Rules>(kcpm_rules_mine, kg, s_.max_body_length, s_.min_support, s_.min_pca_confidence);
    if (hand && mined) return make<Rules>(kcpm_rules_merge, hand.get(), mined.get());
    if (hand) return hand;
    if (mined) return mined;
    return make<Rules>(kcpm_rules_empty);
  }

  kcpm_mining_thresholds thresholds() const {
    kcpm_mining_thresholds t;
    kcpm_mining_thresholds_default(&t);
    t.dependency_threshold = s_.dependency_threshold;
    t.frequency_threshold = s_.frequency_threshold;
    t.all_tasks_connected = s_.all_tasks_connected ? 1 : 0;
    t.long_distance_threshold = s_.long_distance_threshold;
    return t;
  }

  kcpm_filter_mode mode() const { return s_.mode == "strict" ? KCPM_FILTER_STRICT : KCPM_FILTER_PERMISSIVE; }

  /// A dependency graph JSON or, failing that, a ground-truth model whose
  /// graph is used instead.
  Dfg reference(const std::string& path) {
    input(path);
    kcpm_dfg* d = nullptr;
    kcpm_status s = kcpm_dfg_read_json(path.c_str(), &d);
    if (s == KCPM_OK) return Dfg(d);
    std::string first = kcpm_last_error();
    kcpm_synth_model* m = nullptr;
    if (kcpm_synth_model_read(path.c_str(), &m) != KCPM_OK) throw ApiError(s, first);
    SynthModel model(m);
    return make<Dfg>(kcpm_synth_model_dfg, model.get());
  }

  std::vector<const char*> c_strings(const std::vector<std::string>& v) const {
    std::vector<const char*> out;
    for (const auto& x : v) out.push_back(x.c_str());
    return out;
  }

  Scorer train_scorer(const kcpm_log* log, const kcpm_kg* kg) {
    kcpm_scorer_params p;
    kcpm_scorer_params_default(&p);
    p.dimension = s_.scorer_dimension;
    p.margin = s_.scorer_margin;
    p.learning_rate = s_.scorer_learning_rate;
    p.epochs = s_.scorer_epochs;
    p.negatives = s_.scorer_negatives;
    p.seed = s_.seed;
    p.time_buckets = s_.time_buckets;
    return make<Scorer>(kcpm_scorer_train, log, kg, &p);
  }

  Lpg lpg(const kcpm_log* log, const kcpm_kg* kg, const kcpm_alias* alias) {
    auto keys = c_strings(s_.attributes);
    return make<Lpg>(kcpm_lpg_build, log, kg, alias, keys.data(), keys.size());
  }

 private:
  Settings s_;
  std::ostream& out_;
  Manifest manifest_;
};

json conformance_row(const kcpm_log* log, const kcpm_dfg* model) {
  double fit = 0, prec = 0, f = 0;
  check(kcpm_conformance_values(log, model, &fit, &prec, &f));
  return {{"fitness", fit}, {"precision", prec}, {"f_score", f}};
}

std::string table(const std::vector<std::string>& labels, const std::vector<json>& rows) {
  std::vector<const char*> l;
  std::vector<double> fit, prec;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    l.push_back(labels[i].c_str());
    fit.push_back(rows[i]["fitness"].get<double>());
    prec.push_back(rows[i]["precision"].get<double>());
  }
  CStr t;
  check(kcpm_conformance_table(rows.size(), l.data(), fit.data(), prec.data(), t.out()));
  return t.str();
}

// Subcommands ----------------------------------------------------------------

void cmd_ingest(Run& r) {
  json annotation;
  Log log = r.log(&annotation);
  check(kcpm_log_write_xes(log.get(), r.path_of("log.xes").c_str()));
  r.produced("log.xes");
  CStr stats;
  check(kcpm_log_stats_json(log.get(), stats.out()));
  json report{{"stats", stats.parsed()}};
  if (!annotation.is_null()) report["annotation"] = annotation;
  r.write_json("report.json", report);
}

void cmd_stats(Run& r) {
  Log log = r.log();
  CStr stats;
  check(kcpm_log_stats_json(log.get(), stats.out()));
  json report{{"stats", stats.parsed()}};
  r.out() << report["stats"].dump(2) << '\n';
  r.write_json("report.json", report);
}

void cmd_mine_rules(Run& r) {
  r.require(r.s().kg, "--kg");
  Kg kg = r.kg();
  Rules rules = r.rules(kg.get());
  check(kcpm_rules_write(rules.get(), r.path_of("rules.jsonl").c_str()));
  r.produced("rules.jsonl");
  CStr text;
  check(kcpm_rules_text(rules.get(), text.out()));
  r.out() << text.str();
  r.write_json("report.json", {{"triples", kcpm_kg_triple_count(kg.get())}, {"rules", kcpm_rules_count(rules.get())}});
}

void write_dfg(Run& r, const kcpm_dfg* d) {
  CStr j, dot;
  check(kcpm_dfg_to_json(d, j.out()));
  check(kcpm_dfg_to_dot(d, dot.out()));
  r.write("dfg.json", j.str());
  r.write("dfg.dot", dot.str());
}

void cmd_mine_dfg(Run& r) {
  Log log = r.log();
  auto t = r.thresholds();
  Dfg d = make<Dfg>(kcpm_dfg_mine, log.get(), &t);
  write_dfg(r, d.get());
}

Dfg filter_dfg(Run& r, const kcpm_dfg* d, const kcpm_rules* rules, const kcpm_kg* kg, const kcpm_alias* alias,
               CStr& report) {
  kcpm_dfg* out = nullptr;
  check(kcpm_dfg_filter(d, rules, kg, alias, r.mode(), &out, report.out()));
  return Dfg(out);
}

void cmd_filter(Run& r) {
  Dfg d;
  if (!r.s().dfg.empty()) {
    d = make<Dfg>(kcpm_dfg_read_json, r.input(r.s().dfg).c_str());
  } else {
    if (r.s().log.empty()) throw UsageError("--dfg or --log is required");
    Log log = r.log();
    auto t = r.thresholds();
    d = make<Dfg>(kcpm_dfg_mine, log.get(), &t);
  }
  Kg kg = r.kg();
  Alias alias = r.alias();
  Rules rules = r.rules(kg.get());
  check(kcpm_rules_write(rules.get(), r.path_of("rules.jsonl").c_str()));
  r.produced("rules.jsonl");
  CStr report, tbl;
  Dfg filtered = filter_dfg(r, d.get(), rules.get(), kg.get(), alias.get(), report);
  check(kcpm_dfg_filter_table(d.get(), rules.get(), kg.get(), alias.get(), r.mode(), tbl.out()));
  write_dfg(r, filtered.get());
  r.write_json("report.json", {{"filter", report.parsed()}});
  r.write("table.txt", tbl.str());
}

struct Augmented {
  Log log;
  json report;
};

Augmented augment(Run& r, const kcpm_log* log, const kcpm_kg* kg, const kcpm_alias* alias, const kcpm_rules* rules) {
  CStr chaotic, inferred;
  kcpm_log* raw = nullptr;
  check(kcpm_filter_chaotic(log, rules, kg, alias, r.s().strict_ordering ? 1 : 0, &raw, chaotic.out()));
  Log cleaned(raw);
  Scorer scorer;
  if (r.s().use_scorer) {
    scorer = r.train_scorer(cleaned.get(), kg);
    check(kcpm_scorer_save(scorer.get(), r.path_of("scorer.json").c_str()));
    r.produced("scorer.json");
  }
  check(kcpm_infer_missing(cleaned.get(), rules, kg, scorer.get(), r.s().theta, alias, &raw, inferred.out()));
  Log out(raw);
  return {std::move(out), json{{"chaotic", chaotic.parsed()}, {"inference", inferred.parsed()}}};
}

void cmd_augment(Run& r) {
  Log log = r.log();
  Kg kg = r.kg();
  Alias alias = r.alias();
  Rules rules = r.rules(kg.get());
  auto a = augment(r, log.get(), kg.get(), alias.get(), rules.get());
  check(kcpm_log_write_xes(a.log.get(), r.path_of("log.xes").c_str()));
  r.produced("log.xes");
  a.report["events_before"] = kcpm_log_event_count(log.get());
  a.report["events_after"] = kcpm_log_event_count(a.log.get());
  r.write_json("report.json", a.report);
}

void cmd_variants_train(Run& r) {
  const std::string& labels = r.input(r.require(r.s().labels, "--labels"));
  Log log = r.log();
  Kg kg = r.kg();
  Alias alias = r.alias();
  Lpg g = r.lpg(log.get(), kg.get(), alias.get());
  kcpm_variant_params p;
  kcpm_variant_params_default(&p);
  p.dimension = r.s().variant_dimension;
  p.margin = r.s().variant_margin;
  p.learning_rate = r.s().variant_learning_rate;
  p.epochs = r.s().variant_epochs;
  p.negatives = r.s().variant_negatives;
  p.seed = r.s().seed;
  p.classification_weight = r.s().classification_weight;
  VariantModel m = make<VariantModel>(kcpm_variant_train, g.get(), labels.c_str(), &p);
  check(kcpm_variant_save(m.get(), r.path_of("variant_model.json").c_str()));
  r.produced("variant_model.json");
  CStr partition;
  check(kcpm_variant_classify(m.get(), g.get(), log.get(), partition.out(), nullptr));
  r.write_json("report.json", {{"graph", {{"nodes", kcpm_lpg_node_count(g.get())}, {"edges", kcpm_lpg_edge_count(g.get())}}},
                               {"training_partition", partition.parsed()}});
}

void cmd_variants_classify(Run& r) {
  const std::string& model = r.input(r.require(r.s().model, "--model"));
  VariantModel m = make<VariantModel>(kcpm_variant_load, model.c_str());
  Log log = r.log();
  Kg kg = r.kg();
  Alias alias = r.alias();
  Lpg g = r.lpg(log.get(), kg.get(), alias.get());
  CStr pj, pc;
  check(kcpm_variant_classify(m.get(), g.get(), log.get(), pj.out(), pc.out()));
  r.write("partition.json", pj.parsed().dump(2) + "\n");
  r.write("partition.csv", pc.str());
}

void cmd_conform(Run& r) {
  Dfg model = r.reference(r.require(r.s().model, "--model"));
  Log log = r.log();
  CStr report;
  check(kcpm_conformance(log.get(), model.get(), report.out()));
  json row = conformance_row(log.get(), model.get());
  std::string t = table({"Event log"}, {row});
  r.out() << t;
  r.write_json("report.json", {{"conformance", report.parsed()}});
  r.write("table.txt", t);
}

void cmd_synth(Run& r) {
  const std::string& path = r.input(r.require(r.s().model, "--model"));
  SynthModel m = make<SynthModel>(kcpm_synth_model_read, path.c_str());
  Log log = make<Log>(kcpm_synth_simulate, m.get(), static_cast<std::size_t>(r.s().cases), r.s().seed);
  check(kcpm_log_write_xes(log.get(), r.path_of("log.xes").c_str()));
  r.produced("log.xes");
  Dfg d = make<Dfg>(kcpm_synth_model_dfg, m.get());
  write_dfg(r, d.get());
  json report{{"cases", kcpm_log_case_count(log.get())}, {"events", kcpm_log_event_count(log.get())}};
  if (r.s().drop_rate > 0 || r.s().noise_rate > 0) {
    if (r.s().noise_rate > 0 && r.s().noise_alphabet.empty())
      throw UsageError("--noise-alphabet is required when --noise-rate is positive");
    auto alphabet = r.c_strings(r.s().noise_alphabet);
    Log bad = make<Log>(kcpm_synth_corrupt, log.get(), r.s().drop_rate, r.s().noise_rate, alphabet.data(),
                        alphabet.size(), r.s().seed);
    check(kcpm_log_write_xes(bad.get(), r.path_of("corrupted.xes").c_str()));
    r.produced("corrupted.xes");
    report["corrupted"] = {{"cases", kcpm_log_case_count(bad.get())}, {"events", kcpm_log_event_count(bad.get())}};
  }
  r.write_json("report.json", report);
}

void cmd_pipeline(Run& r) {
  json annotation;
  Log raw = r.log(&annotation);
  Kg kg = r.kg();
  Alias alias = r.alias();
  Rules rules = r.rules(kg.get());
  check(kcpm_rules_write(rules.get(), r.path_of("rules.jsonl").c_str()));
  r.produced("rules.jsonl");

  auto a = augment(r, raw.get(), kg.get(), alias.get(), rules.get());
  check(kcpm_log_write_xes(a.log.get(), r.path_of("augmented.xes").c_str()));
  r.produced("augmented.xes");

  auto t = r.thresholds();
  Dfg mined = make<Dfg>(kcpm_dfg_mine, a.log.get(), &t);
  CStr filter_report;
  Dfg filtered = filter_dfg(r, mined.get(), rules.get(), kg.get(), alias.get(), filter_report);
  write_dfg(r, filtered.get());

  Dfg reference = r.s().model.empty() ? nullptr : r.reference(r.s().model);
  const kcpm_dfg* ref = reference ? reference.get() : filtered.get();
  json raw_row = conformance_row(raw.get(), ref);
  json aug_row = conformance_row(a.log.get(), ref);
  std::string t1 = table({"Raw event log", "Augmented event log"}, {raw_row, aug_row});
  r.out() << t1;
  r.write("table.txt", t1);

  json report;
  report["reference"] = reference ? "model" : "filtered-dfg";
  report["raw"] = raw_row;
  report["augmented"] = aug_row;
  report["events_before"] = kcpm_log_event_count(raw.get());
  report["events_after"] = kcpm_log_event_count(a.log.get());
  report["rules"] = kcpm_rules_count(rules.get());
  report["chaotic"] = a.report["chaotic"];
  report["inference"] = a.report["inference"];
  report["filter"] = filter_report.parsed();
  if (!annotation.is_null()) report["annotation"] = annotation;
  r.write_json("report.json", report);
}

// Wiring ---------------------------------------------------------------------

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> fields;  // "section.key"; "section.*" takes a whole section
  void (*body)(Run&);
};

const std::vector<Command>& commands() {
  static const std::vector<Command> kCommands = {
      {"ingest", "Read a log, attach case context and write it as XES", {"paths.log", "paths.mapping", "paths.context"},
       cmd_ingest},
      {"stats", "Print log statistics", {"paths.log", "paths.mapping", "paths.context"}, cmd_stats},
      {"mine-rules", "Mine closed-path rules from a knowledge graph", {"paths.kg", "paths.rules", "rules.*"},
       cmd_mine_rules},
      {"mine-dfg", "Mine a dependency graph from a log", {"paths.log", "paths.mapping", "paths.context", "mining.*"},
       cmd_mine_dfg},
      {"filter",
       "Remove dependency-graph edges the rule base forbids",
       {"paths.dfg", "paths.log", "paths.mapping", "paths.kg", "paths.rules", "paths.alias", "mining.*", "rules.*",
        "filter.*"},
       cmd_filter},
      {"augment",
       "Remove chaotic events and insert missing ones",
       {"paths.log", "paths.mapping", "paths.context", "paths.kg", "paths.rules", "paths.alias", "rules.*", "augment.*",
        "scorer.*"},
       cmd_augment},
      {"variants-train",
       "Train the cohort classifier on a labelled log",
       {"paths.log", "paths.mapping", "paths.context", "paths.kg", "paths.alias", "paths.labels", "variants.*"},
       cmd_variants_train},
      {"variants-classify",
       "Partition a log with a trained cohort classifier",
       {"paths.log", "paths.mapping", "paths.context", "paths.kg", "paths.alias", "paths.model", "variants.attributes"},
       cmd_variants_classify},
      {"conform", "Score a log against a reference model", {"paths.log", "paths.mapping", "paths.model"}, cmd_conform},
      {"synth", "Simulate a log from a ground-truth model", {"paths.model", "synth.*"}, cmd_synth},
      {"pipeline",
       "Augment a log and compare raw and augmented conformance",
       {"paths.log", "paths.mapping", "paths.context", "paths.kg", "paths.rules", "paths.alias", "paths.model",
        "mining.*", "rules.*", "filter.*", "augment.*", "scorer.*"},
       cmd_pipeline},
  };
  return kCommands;
}

bool selected(const Command& c, const Field& f) {
  const std::string key = std::string(f.section) + "." + f.key;
  if (key == "paths.out" || std::string(f.section) == "run") return true;
  for (const auto& want : c.fields)
    if (want == key || want == std::string(f.section) + ".*") return true;
  return false;
}

/// Binds `f` to `target` on `app`.
CLI::Option* add_field(CLI::App& app, const Field& f, Settings& target) {
  return std::visit(
      [&](auto member) -> CLI::Option* {
        auto& ref = target.*member;
        using T = std::remove_reference_t<decltype(ref)>;
        if constexpr (std::is_same_v<T, bool>) {
          return app.add_flag(f.flag, ref, f.help);
        } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
          return app.add_option(f.flag, ref, f.help)->delimiter(',');
        } else {
          return app.add_option(f.flag, ref, f.help);
        }
      },
      f.member);
}

int exit_for(kcpm_status s) {
  return (s == KCPM_ERR_ARGUMENT || s == KCPM_ERR_CONFIG) ? kExitUsage : kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge-driven process mining toolkit", "kcpm"};
  app.set_version_flag("--version", std::string(kcpm_version()));
  app.require_subcommand(1);

  Settings flags;
  std::string config_path;
  struct Bound {
    const Command* command;
    CLI::App* sub;
    std::vector<std::pair<const Field*, CLI::Option*>> options;
  };
  std::vector<Bound> bound;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "Settings file (TOML-style sections)");
    Bound b{&c, sub, {}};
    for (const auto& f : settings_fields())
      if (selected(c, f)) b.options.emplace_back(&f, add_field(*sub, f, flags));
    bound.push_back(std::move(b));
  }

  std::vector<std::string> storage(args.begin(), args.end());
  if (storage.empty()) storage.emplace_back("kcpm");
  std::vector<char*> argv;
  for (auto& a : storage) argv.push_back(a.data());

  const Bound* active = nullptr;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n";
    const CLI::App* help_for = &app;
    for (const auto& b : bound)
      if (b.sub->parsed()) help_for = b.sub;
    err << help_for->help();
    return kExitUsage;
  }
  for (const auto& b : bound)
    if (b.sub->parsed()) active = &b;

  try {
    Settings s;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config " + config_path);
      apply_config(parse_config(in), s, std::filesystem::path(config_path).parent_path().string());
    }
    for (const auto& [field, option] : active->options) {
      if (option->count() == 0) continue;
      std::visit([&](auto member) { s.*member = flags.*member; }, field->member);
    }
    s.validate();
    kcpm_set_threads(s.threads);
    Run r(active->command->name, s, out);
    if (!config_path.empty()) r.input(config_path);
    active->command->body(r);
    r.finish();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ApiError& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.status);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace kcpm::cli
