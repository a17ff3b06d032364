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

#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kcpm/augmentation.hpp"
#include "kcpm/conformance.hpp"
#include "kcpm/dependency_mining.hpp"
#include "kcpm/event_log.hpp"
#include "kcpm/knowledge_graph.hpp"
#include "kcpm/rule_mining.hpp"
#include "kcpm/synth.hpp"
#include "kcpm/variant_analysis.hpp"
#include "oracles.hpp"

namespace kcpm::testing {

namespace {

using Result = std::optional<std::string>;
const Result kOk = std::nullopt;

std::string str(const Pair& p) { return "(" + p.first + "," + p.second + ")"; }

// Event log -------------------------------------------------------------------

Result csv_roundtrip(Rng& rng) {
  EventLog log = random_log(rng, {6, 6, 8, true, true});
  std::stringstream ss;
  write_csv(ss, log);
  EventLog back = parse_csv(ss);
  if (!(back == log)) return "CSV round trip changed the log:\n" + ss.str();
  return kOk;
}

Result xes_roundtrip(Rng& rng) {
  EventLog log = random_log(rng, {6, 6, 8, true, true});
  std::stringstream ss;
  write_xes(ss, log);
  EventLog back = parse_xes(ss);
  if (!(back == log)) return "XES round trip changed the log";
  return kOk;
}

Result df_row_sums(Rng& rng) {
  EventLog log = random_log(rng);
  auto df = directly_follows_counts(log);
  std::map<std::string, std::uint64_t> occ, ends, out;
  for (const auto& t : log.traces()) {
    for (const auto& e : t.events) ++occ[e.activity];
    ++ends[t.events.back().activity];
  }
  for (const auto& [p, n] : df) out[p.first] += n;
  for (const auto& [a, n] : occ)
    if (out[a] + ends[a] != n) return "row sum mismatch for " + a;
  return kOk;
}

Result df_bounded_by_ef(Rng& rng) {
  EventLog log = random_log(rng);
  auto df = directly_follows_counts(log);
  auto ef = eventually_follows_counts(log);
  for (const auto& [p, n] : df) {
    auto it = ef.find(p);
    if (it == ef.end() || it->second < n) return "df > ef for " + str(p);
  }
  if (df != naive_df(sequences_of(log))) return "df differs from the naive scan";
  if (ef != naive_ef(sequences_of(log))) return "ef differs from the naive scan";
  return kOk;
}

Result annotate_preserves_shape(Rng& rng) {
  EventLog log = random_log(rng);
  ContextTable ctx;
  for (const auto& t : log.traces())
    if (coin(rng, 0.7)) ctx.rows[t.case_id]["cohort"] = std::string(coin(rng) ? "x" : "y");
  if (coin(rng)) ctx.rows["unknown-case"]["cohort"] = std::string("z");
  auto [out, report] = annotate_context(log, ctx);
  if (out.case_count() != log.case_count() || out.event_count() != log.event_count() ||
      out.alphabet() != log.alphabet())
    return "annotation changed the log shape";
  if (report.matched_cases + report.unmatched_cases != log.case_count()) return "annotation report does not add up";
  return kOk;
}

Result trace_invariants(Rng& rng) {
  // Shuffled timestamps with ties; construction must sort stably.
  const int n_traces = uniform(rng, 1, 6);
  std::vector<Trace> traces;
  std::set<std::string> alphabet;
  for (int c = 0; c < n_traces; ++c) {
    Trace t;
    t.case_id = "case" + std::to_string(c);
    const int len = uniform(rng, 1, 10);
    for (int i = 0; i < len; ++i) {
      Event e;
      e.case_id = t.case_id;
      e.activity = activity_name(uniform(rng, 0, 4));
      alphabet.insert(e.activity);
      e.timestamp = base_time() + std::chrono::minutes(uniform(rng, 0, 5));
      e.attributes["seq"] = static_cast<std::int64_t>(i);
      t.events.push_back(e);
    }
    traces.push_back(std::move(t));
  }
  EventLog log(traces);
  if (log.alphabet() != alphabet) return "alphabet differs from recomputation";
  std::set<std::string> ids;
  for (const auto& t : log.traces()) {
    if (!ids.insert(t.case_id).second) return "duplicate case id";
    for (std::size_t i = 0; i < t.events.size(); ++i) {
      if (t.events[i].case_id != t.case_id) return "event with foreign case id";
      if (i == 0) continue;
      const auto& a = t.events[i - 1];
      const auto& b = t.events[i];
      if (b.timestamp < a.timestamp) return "events out of order";
      if (b.timestamp == a.timestamp &&
          std::get<std::int64_t>(b.attributes.at("seq")) < std::get<std::int64_t>(a.attributes.at("seq")))
        return "tie order not stable";
    }
  }
  return kOk;
}

// Knowledge graph -------------------------------------------------------------

Result kg_indexes(Rng& rng) {
  KnowledgeGraph kg = random_kg(rng);
  if (kg.query({}).size() != kg.size()) return "wildcard query size differs from triple count";
  std::set<Triple> unique(kg.triples().begin(), kg.triples().end());
  if (unique.size() != kg.size()) return "duplicate triples";
  std::size_t s = 0, p = 0, o = 0;
  for (const auto& e : kg.entities()) {
    s += kg.by_subject(e).size();
    o += kg.by_object(e).size();
  }
  for (const auto& pr : kg.predicates()) p += kg.by_predicate(pr).size();
  if (s != kg.size() || p != kg.size() || o != kg.size()) return "index sizes differ from triple count";
  for (std::uint32_t i = 0; i < kg.size(); ++i) {
    const auto& t = kg.triples()[i];
    auto has = [&](const std::vector<std::uint32_t>& v) { return std::binary_search(v.begin(), v.end(), i); };
    if (!has(kg.by_subject(t.subject)) || !has(kg.by_predicate(t.predicate)) || !has(kg.by_object(t.object)))
      return "index misses a triple";
    TriplePattern pat;
    if (coin(rng)) pat.subject = t.subject;
    if (coin(rng)) pat.predicate = t.predicate;
    if (coin(rng)) pat.object = t.object;
    std::size_t expect = 0;
    for (const auto& u : kg.triples())
      expect += (!pat.subject || *pat.subject == u.subject) && (!pat.predicate || *pat.predicate == u.predicate) &&
                (!pat.object || *pat.object == u.object);
    if (kg.query(pat).size() != expect) return "pattern query size differs from scan";
  }
  return kOk;
}

Result lpg_counts(Rng& rng) {
  EventLog log = random_log(rng, {6, 6, 8, true, false});
  // Entities overlap the activity names so that some nodes merge.
  std::vector<Triple> triples;
  const int n = uniform(rng, 0, 12);
  for (int i = 0; i < n; ++i)
    triples.push_back({activity_name(uniform(rng, 0, 9)), "rel" + std::to_string(uniform(rng, 0, 2)),
                       coin(rng) ? activity_name(uniform(rng, 0, 9)) : "thing" + std::to_string(uniform(rng, 0, 3))});
  KnowledgeGraph kg(triples);
  auto g = build_lpg(log, kg);
  std::set<std::string> resources;
  std::size_t merged = 0, df_expected = 0;
  for (const auto& t : log.traces()) {
    df_expected += t.size() - 1;
    for (const auto& e : t.events)
      if (e.resource) resources.insert(*e.resource);
  }
  for (const auto& a : log.alphabet()) merged += kg.has_entity(a);
  const std::size_t expect =
      log.event_count() + log.case_count() + log.alphabet().size() + resources.size() + kg.entities().size() - merged;
  if (g.nodes().size() != expect)
    return "node count " + std::to_string(g.nodes().size()) + " != " + std::to_string(expect);
  std::size_t df = 0;
  for (const auto& e : g.edges()) {
    if (e.labels.empty()) return "edge without label";
    if (e.source >= g.nodes().size() || e.target >= g.nodes().size()) return "dangling edge";
    df += e.labels.count("DF");
  }
  for (const auto& nd : g.nodes())
    if (nd.labels.empty()) return "node without label";
  if (df != df_expected) return "DF edge count differs from sum of (len-1)";
  return kOk;
}

// Rule mining -----------------------------------------------------------------

std::set<NaiveRule> as_naive(const RuleBase& rb) {
  std::set<NaiveRule> out;
  for (const auto& r : rb.rules())
    out.insert({r.body_predicates(), r.head.predicate, r.support, r.std_confidence, r.pca_confidence});
  return out;
}

std::string rule_diff(const std::set<NaiveRule>& got, const std::set<NaiveRule>& want) {
  auto show = [](const NaiveRule& r) {
    std::string s;
    for (const auto& b : r.body) s += b + " ";
    return s + "=> " + r.head + " supp=" + std::to_string(r.support) + " std=" + std::to_string(r.std_conf) +
           " pca=" + std::to_string(r.pca_conf);
  };
  for (const auto& r : want) {
    auto it = got.find(r);
    if (it == got.end()) return "missing rule " + show(r);
    if (it->support != r.support || std::abs(it->std_conf - r.std_conf) > 1e-12 ||
        std::abs(it->pca_conf - r.pca_conf) > 1e-12)
      return "statistics differ: got " + show(*it) + " want " + show(r);
  }
  for (const auto& r : got)
    if (!want.count(r)) return "extra rule " + show(r);
  return {};
}

Result rules_match_oracle(Rng& rng) {
  KnowledgeGraph kg = random_kg(rng, {50, 6, 8});
  MiningParams p{uniform(rng, 1, 3), static_cast<std::uint64_t>(uniform(rng, 1, 2)), uniform(rng, 0, 4) / 4.0};
  auto got = as_naive(mine_rules(kg, p));
  auto want = naive_rules(kg.triples(), p.max_body_length, p.min_support, p.min_pca_confidence);
  std::string d = rule_diff(got, want);
  if (!d.empty()) return d;
  return kOk;
}

Result rules_threshold_monotone(Rng& rng) {
  KnowledgeGraph kg = random_kg(rng, {30, 4, 6});
  const int len = uniform(rng, 1, 3);
  auto loose = mine_rules(kg, {len, 1, 0.0});
  std::set<std::string> ids;
  for (const auto& r : loose.rules()) ids.insert(r.id());
  auto tight = mine_rules(kg, {len, static_cast<std::uint64_t>(uniform(rng, 1, 3)), uniform(rng, 0, 10) / 10.0});
  for (const auto& r : tight.rules())
    if (!ids.count(r.id())) return "raising thresholds added " + r.id();
  for (const auto& r : loose.rules())
    if (r.pca_confidence + 1e-15 < r.std_confidence) return "pca < std for " + r.id();
  return kOk;
}

Result entailment_monotone(Rng& rng) {
  KnowledgeGraph kg = random_kg(rng, {20, 3, 6});
  RuleBase rb = mine_rules(kg, {2, 1, 0.3});
  KnowledgeGraph bigger = kg.with(random_kg(rng, {10, 3, 6}).triples());
  InferenceClosure small(rb, kg), large(rb, bigger);
  auto ents = bigger.entities();
  auto preds = bigger.predicates();
  for (const auto& s : ents)
    for (const auto& p : preds)
      for (const auto& o : ents) {
        Triple t{s, p, o};
        if (small.query(t).entailed && !large.query(t).entailed) return "adding facts lost " + s + " " + p + " " + o;
      }
  return kOk;
}

Result rules_deterministic(Rng& rng) {
  KnowledgeGraph kg = random_kg(rng, {40, 5, 7});
  MiningParams p{3, 1, 0.0};
  auto text = [&](unsigned threads) {
    set_thread_count(threads);
    std::stringstream ss;
    write_rules_jsonl(ss, mine_rules(kg, p));
    set_thread_count(1);
    return ss.str();
  };
  if (text(1) != text(4)) return "serialized rule base depends on the thread count";
  std::stringstream ss(text(1));
  std::stringstream again;
  write_rules_jsonl(again, read_rules_jsonl(ss));
  if (again.str() != text(1)) return "JSONL round trip is not stable";
  return kOk;
}

// Dependency mining -------------------------------------------------------------

Result mining_matches_oracle(Rng& rng) {
  EventLog log = random_log(rng);
  auto seqs = sequences_of(log);
  const double dep = coin(rng) ? 0.0 : uniform(rng, 0, 9) / 10.0;
  const std::uint64_t freq = coin(rng) ? 0 : static_cast<std::uint64_t>(uniform(rng, 1, 3));
  auto dg = mine_dependency_graph(log, {dep, freq, false, std::nullopt});
  auto want = naive_dependency_graph(seqs, dep, freq);
  auto df = naive_df(seqs);
  if (dg.edges.size() != want.edges.size()) return "edge count differs from brute force";
  for (const auto& [p, e] : dg.edges) {
    auto it = want.edges.find(p);
    if (it == want.edges.end()) return "unexpected edge " + str(p);
    if (e.dependency != it->second) return "measure differs on " + str(p);
    if (e.df_count != df[p]) return "count differs on " + str(p);
  }
  if (dg.l1_loops != want.l1) return "length-one loops differ";
  if (dg.l2_loops != want.l2) return "length-two loops differ";
  if (dg.activities != log.alphabet()) return "activities differ from alphabet";
  return kOk;
}

Result mining_threshold_monotone(Rng& rng) {
  EventLog log = random_log(rng);
  const double lo = uniform(rng, 0, 9) / 10.0;
  const double hi = std::min(0.9, lo + uniform(rng, 0, 10) / 10.0);
  auto a = mine_dependency_graph(log, {lo, 1, false, std::nullopt});
  auto b = mine_dependency_graph(log, {hi, 1, false, std::nullopt});
  for (const auto& [p, e] : b.edges)
    if (!a.edges.count(p)) return "raising the threshold added " + str(p);
  return kOk;
}

Result measure_algebra(Rng& rng) {
  const auto ab = static_cast<std::uint64_t>(uniform(rng, 0, 5000));
  const auto ba = static_cast<std::uint64_t>(uniform(rng, 0, 5000));
  if (dependency_measure(ab, ba) != -dependency_measure(ba, ab)) return "measure not antisymmetric";
  if (!(dependency_measure(ab + 1, ba) > dependency_measure(ab, ba))) return "measure not increasing in ab";
  const double m = dependency_measure(ab, ba);
  if (!(m > -1 && m < 1)) return "measure outside (-1, 1)";
  return kOk;
}

KnowledgeGraph control_flow_kg(Rng& rng, const std::set<std::string>& alphabet, double coverage) {
  std::vector<std::string> acts(alphabet.begin(), alphabet.end());
  std::vector<Triple> triples;
  static const char* preds[] = {predicates::kDirectlyFollows, predicates::kMustPrecede, predicates::kForbiddenBefore,
                                "pre", "bad"};
  const int n = uniform(rng, 0, static_cast<int>(acts.size() * acts.size()));
  for (int i = 0; i < n; ++i) {
    const auto& a = acts[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(acts.size()) - 1))];
    const auto& b = acts[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(acts.size()) - 1))];
    if (!coin(rng, coverage)) continue;
    triples.push_back({a, preds[uniform(rng, 0, 4)], b});
  }
  return KnowledgeGraph(triples);
}

RuleBase control_flow_rules(Rng& rng) {
  auto r1 = ClosedPathRule::chain({"pre"}, predicates::kMustPrecede);
  r1.pca_confidence = uniform(rng, 1, 10) / 10.0;
  auto r2 = ClosedPathRule::chain({"bad"}, predicates::kForbiddenBefore);
  r2.pca_confidence = uniform(rng, 1, 10) / 10.0;
  auto r3 = ClosedPathRule::chain({"pre", "pre"}, predicates::kMustPrecede);
  r3.pca_confidence = uniform(rng, 1, 10) / 10.0;
  return RuleBase({r1, r2, r3}, {});
}

Result filter_shrinks(Rng& rng) {
  EventLog log = random_log(rng);
  auto dg = mine_dependency_graph(log, {0.0, 1, false, std::nullopt});
  KnowledgeGraph kg = control_flow_kg(rng, log.alphabet(), 0.8);
  RuleBase rb = control_flow_rules(rng);
  for (auto mode : {FilterMode::kStrict, FilterMode::kPermissive}) {
    auto [out, report] = filter_dependency_graph(dg, rb, kg, AliasMap{}, mode);
    for (const auto& [p, e] : out.edges) {
      auto it = dg.edges.find(p);
      if (it == dg.edges.end()) return "filter added " + str(p);
      if (!(it->second == e)) return "filter changed " + str(p);
    }
    if (report.kept_edges != out.edges.size() || report.kept_edges + report.removed_edges.size() != dg.edges.size())
      return "filter report does not add up";
    for (const auto& r : report.removed_edges)
      if (out.edges.count(r.edge)) return "removed edge still present";
  }
  return kOk;
}

// Augmentation ------------------------------------------------------------------

struct RepairCase {
  EventLog log;
  KnowledgeGraph kg;
  RuleBase rb;
};

RepairCase repair_case(Rng& rng) {
  RepairCase c{random_log(rng, {6, 8, 10, false, false}), {}, control_flow_rules(rng)};
  // Only some activities are known to the graph.
  std::set<std::string> mapped;
  for (const auto& a : c.log.alphabet())
    if (coin(rng, 0.75)) mapped.insert(a);
  if (!mapped.empty()) c.kg = control_flow_kg(rng, mapped, 0.6);
  return c;
}

std::map<std::string, std::vector<std::string>> by_case(const EventLog& log) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& t : log.traces())
    for (const auto& e : t.events) out[t.case_id].push_back(e.activity);
  return out;
}

Result infer_superset(Rng& rng) {
  auto c = repair_case(rng);
  const double theta = uniform(rng, 0, 10) / 10.0;
  auto [out, report] = infer_missing_events(c.log, c.rb, c.kg, nullptr, theta, AliasMap{});
  if (out.event_count() < c.log.event_count()) return "inference lost events";
  if (out.event_count() != c.log.event_count() + report.inserted.size()) return "insertions not all reported";
  auto before = by_case(c.log), after = by_case(out);
  for (const auto& [id, seq] : before)
    if (!is_subsequence(seq, after[id])) return "trace " + id + " is not a subsequence of its repair";
  for (const auto& t : out.traces())
    for (const auto& e : t.events)
      if (e.attributes.count(kSyntheticAttribute) &&
          std::find_if(report.inserted.begin(), report.inserted.end(), [&](const CandidateInsertion& i) {
            return i.case_id == t.case_id && i.activity == e.activity;
          }) == report.inserted.end())
        return "synthetic event missing from the report";
  for (const auto& i : report.inserted)
    if (i.score < theta || i.score > 1) return "accepted insertion scored below theta";
  return kOk;
}

Result chaotic_shrinks(Rng& rng) {
  auto c = repair_case(rng);
  ChaoticFilterOptions opt{coin(rng)};
  auto [out, report] = filter_chaotic_events(c.log, c.rb, c.kg, AliasMap{}, opt);
  if (out.event_count() > c.log.event_count()) return "filter added events";
  AliasMap alias;
  for (const auto& r : report.removed_events)
    if (!alias.resolve(r.activity, c.kg)) return "removed unmapped activity " + r.activity;
  auto before = by_case(c.log), after = by_case(out);
  for (const auto& [id, seq] : after)
    if (!is_subsequence(seq, before[id])) return "filtered trace is not a subsequence";
  const std::size_t removed = report.removed_events.size();
  if (out.event_count() + removed != c.log.event_count()) return "removals not all reported";
  // Idempotence.
  auto [twice, again] = filter_chaotic_events(out, c.rb, c.kg, AliasMap{}, opt);
  if (!(twice == out) || !again.removed_events.empty()) return "second pass removed more events";
  return kOk;
}

EventLog scorer_log(Rng& rng) {
  while (true) {
    EventLog log = random_log(rng, {5, 6, 8, false, false});
    if (log.alphabet().size() >= 2 && !directly_follows_counts(log).empty()) return log;
  }
}

ScorerParams tiny_scorer(Rng& rng) {
  ScorerParams p;
  p.dimension = uniform(rng, 2, 6);
  p.epochs = uniform(rng, 3, 10);
  p.negatives = uniform(rng, 1, 3);
  p.time_buckets = uniform(rng, 1, 6);
  p.seed = rng();
  return p;
}

Result degree_bounds(Rng& rng) {
  EventLog log = scorer_log(rng);
  auto s = train_temporal_scorer(log, {}, tiny_scorer(rng));
  std::vector<std::pair<double, double>> dd;
  for (const auto& a : s.vocabulary())
    for (const auto& b : s.vocabulary()) {
      Instant t = base_time() + std::chrono::minutes(uniform(rng, 0, 2000));
      double deg = directly_follows_degree(s, a, b, t);
      if (!(deg > 0 && deg < 1)) return "degree outside (0,1)";
      dd.emplace_back(s.distance(a, b, t), deg);
    }
  std::sort(dd.begin(), dd.end());
  for (std::size_t i = 1; i < dd.size(); ++i)
    if (dd[i].second > dd[i - 1].second) return "degree not monotone in distance";
  for (std::size_t i = 1; i < s.loss_history().size(); ++i)
    if (s.loss_history()[i] > s.loss_history()[i - 1]) return "training loss increased";
  return kOk;
}

Result augment_deterministic(Rng& rng) {
  auto c = repair_case(rng);
  if (c.log.alphabet().size() < 2 || directly_follows_counts(c.log).empty()) return kOk;
  ScorerParams p = tiny_scorer(rng);
  const double theta = uniform(rng, 0, 10) / 10.0;
  auto once = [&] {
    auto [clean, r1] = filter_chaotic_events(c.log, c.rb, c.kg, AliasMap{});
    std::optional<TemporalScorer> s;
    if (clean.alphabet().size() >= 2 && !directly_follows_counts(clean).empty())
      s = train_temporal_scorer(clean, c.kg, p);
    auto [out, r2] = infer_missing_events(clean, c.rb, c.kg, s ? &*s : nullptr, theta, AliasMap{});
    std::stringstream ss;
    write_xes(ss, out);
    return ss.str() + augmentation_report_to_json(r1) + augmentation_report_to_json(r2) + (s ? s->to_json() : "");
  };
  if (once() != once()) return "augmentation is not deterministic";
  return kOk;
}

// Variants --------------------------------------------------------------------

struct VariantCase {
  EventLog log;
  CaseLabels labels;
  VariantModel model;
};

VariantCase variant_case(Rng& rng) {
  VariantCase c;
  while (true) {
    c.log = random_log(rng, {5, 8, 6, true, false});
    c.labels.clear();
    std::set<std::string> classes;
    for (const auto& t : c.log.traces()) {
      std::string k = "k" + std::to_string(uniform(rng, 0, 2));
      c.labels[t.case_id] = k;
      classes.insert(k);
    }
    if (classes.size() >= 2) break;
  }
  VariantParams p;
  p.dimension = uniform(rng, 2, 5);
  p.epochs = uniform(rng, 2, 6);
  p.seed = rng();
  c.model = train_variant_model(build_lpg(c.log, {}), c.labels, p);
  return c;
}

Result partition_covers(Rng& rng) {
  auto c = variant_case(rng);
  auto lpg = build_lpg(c.log, {});
  auto part = classify_log(c.model, lpg, c.log);
  std::size_t total = 0;
  std::set<std::string> seen;
  for (const auto& [k, cases] : part.cells()) {
    total += cases.size();
    for (const auto& id : cases)
      if (!seen.insert(id).second) return "case " + id + " in two cells";
  }
  if (total != c.log.case_count()) return "cells do not cover the log";
  for (const auto& [id, scores] : part.scores) {
    double sum = 0;
    for (const auto& [k, p] : scores) {
      if (!(p >= 0 && p <= 1)) return "probability outside [0,1]";
      sum += p;
    }
    if (std::abs(sum - 1) > 1e-9) return "scores of " + id + " do not sum to one";
    if (part.assignment.at(id) != argmax_class(scores)) return "assignment is not the argmax";
    // Positive rescaling of the logits keeps the winner.
    for (double scale : {0.25, 3.0, 40.0}) {
      std::map<std::string, double> scaled;
      double mx = -1e300;
      for (const auto& [k, p] : scores) mx = std::max(mx, scale * std::log(std::max(p, 1e-300)));
      double z = 0;
      for (const auto& [k, p] : scores) z += scaled[k] = std::exp(scale * std::log(std::max(p, 1e-300)) - mx);
      for (auto& [k, v] : scaled) v /= z;
      if (argmax_class(scaled) != argmax_class(scores)) return "rescaled logits changed the argmax";
    }
  }
  return kOk;
}

Result permutation_invariance(Rng& rng) {
  auto c = variant_case(rng);
  auto traces = c.log.traces();
  std::shuffle(traces.begin(), traces.end(), rng);
  EventLog permuted(traces);
  auto a = classify_log(c.model, build_lpg(c.log, {}), c.log);
  auto b = classify_log(c.model, build_lpg(permuted, {}), permuted);
  if (a.assignment != b.assignment) return "permutation changed an assignment";
  for (const auto& [id, scores] : a.scores)
    for (const auto& [k, p] : scores)
      if (std::abs(b.scores.at(id).at(k) - p) > 1e-12) return "permutation changed a score";
  return kOk;
}

Result variant_deterministic(Rng& rng) {
  EventLog log = random_log(rng, {4, 6, 5, false, false});
  CaseLabels labels;
  int i = 0;
  for (const auto& t : log.traces()) labels[t.case_id] = (i++ % 2) ? "odd" : "even";
  if (log.case_count() < 2) return kOk;
  VariantParams p;
  p.dimension = 3;
  p.epochs = 3;
  p.seed = rng();
  auto lpg = build_lpg(log, {});
  auto m1 = train_variant_model(lpg, labels, p);
  set_thread_count(3);
  auto m2 = train_variant_model(lpg, labels, p);
  auto s1 = partition_to_json(classify_log(m1, lpg, log));
  auto s2 = partition_to_json(classify_log(m2, lpg, log));
  set_thread_count(1);
  if (m1.to_json() != m2.to_json() || s1 != s2) return "training is not deterministic";
  return kOk;
}

// Conformance -------------------------------------------------------------------

Result footprint_symmetry(Rng& rng) {
  EventLog log = random_log(rng);
  auto dg = mine_dependency_graph(log, {uniform(rng, 0, 9) / 10.0, 1, false, std::nullopt});
  for (const auto& fp : {footprint_of_log(log), footprint_of_model(dg)}) {
    for (const auto& a : fp.activities())
      for (const auto& b : fp.activities()) {
        auto x = fp.relation(a, b), y = fp.relation(b, a);
        bool ok = (x == Footprint::kCausal && y == Footprint::kReverse) ||
                  (x == Footprint::kReverse && y == Footprint::kCausal) ||
                  (x == Footprint::kParallel && y == Footprint::kParallel) ||
                  (x == Footprint::kUnrelated && y == Footprint::kUnrelated);
        if (!ok) return "asymmetric footprint at " + a + "," + b;
      }
  }
  auto df = naive_df(sequences_of(log));
  std::set<Pair> follows;
  for (const auto& [p, n] : df) follows.insert(p);
  auto want = naive_footprint(log.alphabet(), follows);
  auto fp = footprint_of_log(log);
  for (const auto& [p, r] : want)
    if (static_cast<char>(fp.relation(p.first, p.second)) != r) return "log footprint differs at " + str(p);
  return kOk;
}

Result conformance_identity(Rng& rng) {
  EventLog log = random_log(rng);
  auto fp = footprint_of_log(log);
  auto r = conformance(fp, fp);
  if (r.fitness != 1 || r.precision != 1 || r.f_score != 1 || !r.deviations.empty())
    return "conformance(x, x) is not perfect";
  return kOk;
}

Result fitness_monotone(Rng& rng) {
  EventLog log = random_log(rng);
  auto dg = mine_dependency_graph(log, {uniform(rng, 0, 9) / 10.0, 1, false, std::nullopt});
  // Drop a random share of the model edges, then add back one log pair.
  std::erase_if(dg.edges, [&](const auto&) { return coin(rng, 0.4); });
  auto fp_log = footprint_of_log(log);
  double before = conformance(fp_log, footprint_of_model(dg)).fitness;
  auto df = directly_follows_counts(log);
  std::vector<ActivityPair> missing;
  for (const auto& [p, n] : df)
    if (!dg.edges.count(p)) missing.push_back(p);
  if (missing.empty()) return kOk;
  dg.edges[missing[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(missing.size()) - 1))]] = {1, 0.5, false};
  double after = conformance(fp_log, footprint_of_model(dg)).fitness;
  if (after < before) return "adding a log edge lowered fitness";
  return kOk;
}

// Synth -------------------------------------------------------------------------

GroundTruthModel random_model(Rng& rng) {
  GroundTruthModel m;
  const int n = uniform(rng, 2, 6);
  for (int i = 0; i < n; ++i) m.activities.insert(activity_name(i));
  std::vector<std::string> acts(m.activities.begin(), m.activities.end());
  m.start[acts[0]] = 1.0;
  for (const auto& a : acts) {
    double end = uniform(rng, 2, 6) / 10.0;
    m.end[a] = end;
    const auto& b = acts[static_cast<std::size_t>(uniform(rng, 0, n - 1))];
    const auto& c = acts[static_cast<std::size_t>(uniform(rng, 0, n - 1))];
    double rest = 1 - end;
    if (b == c) {
      m.transitions[a][b] = rest;
    } else {
      m.transitions[a][b] = rest / 2;
      m.transitions[a][c] = rest / 2;
    }
  }
  return m;
}

Result synth_properties(Rng& rng) {
  auto m = random_model(rng);
  const auto n = static_cast<std::size_t>(uniform(rng, 1, 30));
  const std::uint64_t seed = rng();
  EventLog a = simulate(m, n, seed), b = simulate(m, n, seed);
  if (!(a == b)) return "simulate is not deterministic";
  CorruptionSpec zero{0, 0, {"n0"}, rng()};
  if (!(corrupt(a, zero) == a)) return "zero-rate corruption changed the log";
  CorruptionSpec spec{uniform(rng, 0, 5) / 10.0, uniform(rng, 0, 5) / 10.0, {"n0", "n1"}, rng()};
  EventLog c1 = corrupt(a, spec), c2 = corrupt(a, spec);
  if (!(c1 == c2)) return "corrupt is not deterministic";
  for (const auto& t : c1.traces()) {
    const Trace* src = a.find(t.case_id);
    if (!src) return "corrupted trace with unknown case";
    std::vector<std::string> kept, source;
    for (const auto& e : src->events) source.push_back(e.activity);
    for (const auto& e : t.events) {
      if (e.attributes.count(kInjectedAttribute)) {
        if (!spec.noise_alphabet.count(e.activity)) return "injected event outside the noise alphabet";
        continue;
      }
      kept.push_back(e.activity);
    }
    if (!is_subsequence(kept, source)) return "surviving events are not from the source trace";
  }
  return kOk;
}

}  // namespace

const std::vector<Property>& properties() {
  static const std::vector<Property> kAll = {
      {"event_log", "csv_roundtrip", csv_roundtrip},
      {"event_log", "xes_roundtrip", xes_roundtrip},
      {"event_log", "df_row_sums", df_row_sums},
      {"event_log", "df_bounded_by_ef", df_bounded_by_ef},
      {"event_log", "annotate_preserves_shape", annotate_preserves_shape},
      {"event_log", "trace_invariants", trace_invariants},
      {"knowledge_graph", "indexes_and_queries", kg_indexes},
      {"knowledge_graph", "lpg_counts", lpg_counts},
      {"rule_mining", "matches_oracle", rules_match_oracle},
      {"rule_mining", "threshold_monotone", rules_threshold_monotone},
      {"rule_mining", "entailment_monotone", entailment_monotone},
      {"rule_mining", "deterministic", rules_deterministic},
      {"dependency_mining", "matches_oracle", mining_matches_oracle},
      {"dependency_mining", "threshold_monotone", mining_threshold_monotone},
      {"dependency_mining", "measure_algebra", measure_algebra},
      {"dependency_mining", "filter_shrinks", filter_shrinks},
      {"augmentation", "infer_superset", infer_superset},
      {"augmentation", "chaotic_shrinks_idempotent", chaotic_shrinks},
      {"augmentation", "degree_bounds", degree_bounds},
      {"augmentation", "deterministic", augment_deterministic},
      {"variant_analysis", "partition_softmax_argmax", partition_covers},
      {"variant_analysis", "permutation_invariance", permutation_invariance},
      {"variant_analysis", "deterministic", variant_deterministic},
      {"conformance", "footprint_symmetry", footprint_symmetry},
      {"conformance", "identity", conformance_identity},
      {"conformance", "fitness_monotone", fitness_monotone},
      {"synth", "determinism_and_provenance", synth_properties},
  };
  return kAll;
}

PropertyOutcome run_property(const Property& p, std::size_t instances, std::uint64_t seed) {
  PropertyOutcome out;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(seed * 1000003u + i);
    Result r;
    try {
      r = p.instance(rng);
    } catch (const std::exception& e) {
      r = std::string("exception: ") + e.what();
    }
    ++out.instances;
    if (r) {
      if (out.failures++ == 0) out.first_failure = "instance " + std::to_string(i) + ": " + *r;
    }
  }
  return out;
}

}  // namespace kcpm::testing
