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

#include "kcpm/dependency_mining.hpp"

#include <cstdio>
#include <json.hpp>
#include <ostream>
#include <tuple>

namespace kcpm {

double dependency_measure(std::uint64_t ab, std::uint64_t ba) {
  const double x = static_cast<double>(ab), y = static_cast<double>(ba);
  return (x - y) / (x + y + 1.0);
}

double length_one_loop_measure(std::uint64_t aa) {
  const double x = static_cast<double>(aa);
  return x / (x + 1.0);
}

double length_two_loop_measure(std::uint64_t aba, std::uint64_t bab) {
  const double s = static_cast<double>(aba) + static_cast<double>(bab);
  return s / (s + 1.0);
}

double DependencyGraph::l2_loop(const std::string& a, const std::string& b) const {
  auto it = l2_loops.find(a < b ? ActivityPair{a, b} : ActivityPair{b, a});
  return it == l2_loops.end() ? 0.0 : it->second;
}

void MiningThresholds::validate() const {
  if (!(dependency_threshold >= 0.0 && dependency_threshold < 1.0))
    throw ConfigError("dependency threshold must be in [0,1)");
  if (long_distance_threshold && !(*long_distance_threshold >= 0.0 && *long_distance_threshold < 1.0))
    throw ConfigError("long-distance threshold must be in [0,1)");
}

PairCounts length_two_loop_counts(const EventLog& log) {
  PairCounts counts;
  for (const Trace& t : log.traces()) {
    const auto& ev = t.events;
    for (std::size_t i = 0; i + 2 < ev.size(); ++i)
      if (ev[i].activity == ev[i + 2].activity && ev[i].activity != ev[i + 1].activity)
        ++counts[{ev[i].activity, ev[i + 1].activity}];
  }
  return counts;
}

namespace {

std::uint64_t count_of(const PairCounts& c, const std::string& a, const std::string& b) {
  auto it = c.find({a, b});
  return it == c.end() ? 0 : it->second;
}

}  // namespace

DependencyGraph mine_dependency_graph(const EventLog& log, const MiningThresholds& th) {
  th.validate();
  if (log.empty()) throw DataError("cannot mine a dependency graph from an empty log");

  DependencyGraph dg;
  dg.activities = log.alphabet();
  for (const Trace& t : log.traces()) {
    ++dg.start_activities[t.events.front().activity];
    ++dg.end_activities[t.events.back().activity];
  }

  const PairCounts df = directly_follows_counts(log);
  const std::uint64_t min_count = std::max<std::uint64_t>(1, th.frequency_threshold);
  for (const auto& [pair, n] : df) {
    const auto& [a, b] = pair;
    if (a == b) {
      double m = length_one_loop_measure(n);
      dg.l1_loops[a] = m;
      if (n >= min_count && m >= th.dependency_threshold) dg.edges[pair] = {n, m, false};
      continue;
    }
    double m = dependency_measure(n, count_of(df, b, a));
    if (n >= min_count && m > 0.0 && m >= th.dependency_threshold) dg.edges[pair] = {n, m, false};
  }

  const PairCounts l2 = length_two_loop_counts(log);
  for (const auto& [pair, n] : l2) {
    const auto& [a, b] = pair;
    ActivityPair key = a < b ? pair : ActivityPair{b, a};
    if (dg.l2_loops.count(key)) continue;
    dg.l2_loops[key] = length_two_loop_measure(count_of(l2, key.first, key.second),
                                               count_of(l2, key.second, key.first));
  }

  if (th.long_distance_threshold) {
    const PairCounts ef = eventually_follows_counts(log);
    for (const auto& [pair, n] : ef) {
      if (pair.first == pair.second) continue;
      double m = dependency_measure(n, count_of(ef, pair.second, pair.first));
      if (n >= min_count && m > 0.0 && m >= *th.long_distance_threshold) dg.long_distance[pair] = m;
    }
  }

  if (th.all_tasks_connected) {
    // Best candidate: highest measure, then highest count, then name order.
    auto better = [](double m1, std::uint64_t c1, const std::string& n1, double m2, std::uint64_t c2,
                     const std::string& n2) { return std::tie(m2, c2, n1) < std::tie(m1, c1, n2); };
    for (const auto& act : dg.activities) {
      if (!dg.start_activities.count(act)) {
        bool has_in = false;
        std::optional<std::string> best;
        double bm = 0;
        std::uint64_t bc = 0;
        for (const auto& [pair, n] : df) {
          if (pair.second != act || pair.first == act) continue;
          if (dg.edges.count(pair)) has_in = true;
          double m = dependency_measure(n, count_of(df, act, pair.first));
          if (!best || better(m, n, pair.first, bm, bc, *best)) best = pair.first, bm = m, bc = n;
        }
        if (!has_in && best) dg.edges[{*best, act}] = {bc, bm, true};
      }
      if (!dg.end_activities.count(act)) {
        bool has_out = false;
        std::optional<std::string> best;
        double bm = 0;
        std::uint64_t bc = 0;
        for (const auto& [pair, n] : df) {
          if (pair.first != act || pair.second == act) continue;
          if (dg.edges.count(pair)) has_out = true;
          double m = dependency_measure(n, count_of(df, pair.second, act));
          if (!best || better(m, n, pair.second, bm, bc, *best)) best = pair.second, bm = m, bc = n;
        }
        if (!has_out && best) dg.edges[{act, *best}] = {bc, bm, true};
      }
    }
  }
  return dg;
}

// Filtering -------------------------------------------------------------------

std::pair<DependencyGraph, FilterReport> filter_dependency_graph(const DependencyGraph& dg,
                                                                 const InferenceClosure& closure,
                                                                 const KnowledgeGraph& kg,
                                                                 const AliasMap& alias, FilterMode mode) {
  FilterReport report;
  report.mode = mode;
  DependencyGraph out = dg;
  out.edges.clear();
  for (const auto& [pair, edge] : dg.edges) {
    auto a = alias.resolve(pair.first, kg);
    auto b = alias.resolve(pair.second, kg);
    if (!a || !b) {
      out.edges.emplace(pair, edge);
      continue;
    }
    if (mode == FilterMode::kStrict) {
      Triple fact{*a, predicates::kDirectlyFollows, *b};
      if (closure.query(fact).entailed) {
        out.edges.emplace(pair, edge);
      } else {
        report.removed_edges.push_back({pair, RemovalReason::kNotEntailed, std::nullopt, {}});
      }
      continue;
    }
    Triple precede{*b, predicates::kMustPrecede, *a};
    Triple forbidden{*a, predicates::kForbiddenBefore, *b};
    Entailment e1 = closure.query(precede);
    Entailment e2 = closure.query(forbidden);
    if (e1.entailed || e2.entailed) {
      const bool first = e1.entailed;
      report.removed_edges.push_back(
          {pair, RemovalReason::kContradicted, first ? precede : forbidden, first ? e1.rule_id : e2.rule_id});
    } else {
      out.edges.emplace(pair, edge);
    }
  }
  report.kept_edges = out.edges.size();
  return {std::move(out), std::move(report)};
}

std::pair<DependencyGraph, FilterReport> filter_dependency_graph(const DependencyGraph& dg,
                                                                 const RuleBase& rb,
                                                                 const KnowledgeGraph& kg,
                                                                 const AliasMap& alias, FilterMode mode) {
  return filter_dependency_graph(dg, InferenceClosure(rb, kg), kg, alias, mode);
}

std::string to_string(FilterMode m) { return m == FilterMode::kStrict ? "strict" : "permissive"; }
std::string to_string(RemovalReason r) {
  return r == RemovalReason::kNotEntailed ? "not_entailed" : "contradicted";
}
std::optional<FilterMode> parse_filter_mode(const std::string& s) {
  if (s == "strict") return FilterMode::kStrict;
  if (s == "permissive") return FilterMode::kPermissive;
  return std::nullopt;
}

// Serialization ---------------------------------------------------------------

std::string dependency_graph_to_json(const DependencyGraph& dg) {
  nlohmann::json j;
  j["activities"] = dg.activities;
  j["edges"] = nlohmann::json::array();
  for (const auto& [p, e] : dg.edges)
    j["edges"].push_back({{"from", p.first},
                          {"to", p.second},
                          {"df_count", e.df_count},
                          {"dependency", e.dependency},
                          {"forced", e.forced}});
  j["l1_loops"] = dg.l1_loops;
  auto pairs = [](const std::map<ActivityPair, double>& m) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [p, v] : m) arr.push_back({{"a", p.first}, {"b", p.second}, {"measure", v}});
    return arr;
  };
  j["l2_loops"] = pairs(dg.l2_loops);
  j["long_distance"] = pairs(dg.long_distance);
  j["start_activities"] = dg.start_activities;
  j["end_activities"] = dg.end_activities;
  return j.dump(2);
}

DependencyGraph dependency_graph_from_json(const std::string& text) {
  DependencyGraph dg;
  try {
    auto j = nlohmann::json::parse(text);
    if (j.contains("activities")) dg.activities = j["activities"].get<std::set<std::string>>();
    for (const auto& e : j.at("edges")) {
      ActivityPair p{e.at("from").get<std::string>(), e.at("to").get<std::string>()};
      DependencyEdge edge;
      edge.df_count = e.value("df_count", std::uint64_t{0});
      edge.dependency = e.value("dependency", 0.0);
      edge.forced = e.value("forced", false);
      dg.activities.insert(p.first);
      dg.activities.insert(p.second);
      dg.edges[p] = edge;
    }
    if (j.contains("l1_loops")) dg.l1_loops = j["l1_loops"].get<std::map<std::string, double>>();
    auto pairs = [&](const char* key, std::map<ActivityPair, double>& m) {
      if (!j.contains(key)) return;
      for (const auto& e : j[key])
        m[{e.at("a").get<std::string>(), e.at("b").get<std::string>()}] = e.at("measure").get<double>();
    };
    pairs("l2_loops", dg.l2_loops);
    pairs("long_distance", dg.long_distance);
    if (j.contains("start_activities"))
      dg.start_activities = j["start_activities"].get<std::map<std::string, std::uint64_t>>();
    if (j.contains("end_activities"))
      dg.end_activities = j["end_activities"].get<std::map<std::string, std::uint64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dependency graph JSON: ") + e.what(), 0);
  }
  return dg;
}

void write_dependency_dot(std::ostream& out, const DependencyGraph& dg) {
  auto q = [](const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r + "\"";
  };
  out << "digraph dependency_graph {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const auto& a : dg.activities) out << "  " << q(a) << ";\n";
  for (const auto& [p, e] : dg.edges) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%llu/%.3f", static_cast<unsigned long long>(e.df_count), e.dependency);
    out << "  " << q(p.first) << " -> " << q(p.second) << " [label=\"" << buf << "\""
        << (e.forced ? ", style=dashed" : "") << "];\n";
  }
  out << "}\n";
}

std::string filter_report_to_json(const FilterReport& report) {
  nlohmann::json j;
  j["mode"] = to_string(report.mode);
  j["kept_edges"] = report.kept_edges;
  j["removed_edges"] = nlohmann::json::array();
  for (const auto& r : report.removed_edges) {
    nlohmann::json e = {{"from", r.edge.first}, {"to", r.edge.second}, {"reason", to_string(r.reason)}};
    e["fact"] = r.fact ? nlohmann::json{{"s", r.fact->subject}, {"p", r.fact->predicate}, {"o", r.fact->object}}
                       : nlohmann::json(nullptr);
    e["rule"] = r.rule_id.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.rule_id);
    j["removed_edges"].push_back(std::move(e));
  }
  return j.dump(2);
}

void write_filter_report_table(std::ostream& out, const FilterReport& report) {
  out << "mode: " << to_string(report.mode) << ", kept " << report.kept_edges << ", removed "
      << report.removed_edges.size() << "\n";
  if (report.removed_edges.empty()) return;
  out << "from\tto\treason\trule\n";
  for (const auto& r : report.removed_edges)
    out << r.edge.first << '\t' << r.edge.second << '\t' << to_string(r.reason) << '\t'
        << (r.rule_id.empty() ? "-" : r.rule_id) << '\n';
}

}  // namespace kcpm
