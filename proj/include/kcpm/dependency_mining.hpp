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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kcpm/event_log.hpp"
#include "kcpm/knowledge_graph.hpp"
#include "kcpm/rule_mining.hpp"

namespace kcpm {

/// (|a>b| - |b>a|) / (|a>b| + |b>a| + 1)
double dependency_measure(std::uint64_t ab, std::uint64_t ba);

/// |a>a| / (|a>a| + 1)
double length_one_loop_measure(std::uint64_t aa);

/// (|a>>b| + |b>>a|) / (|a>>b| + |b>>a| + 1), where |a>>b| counts a,b,a.
double length_two_loop_measure(std::uint64_t aba, std::uint64_t bab);

struct DependencyEdge {
  std::uint64_t df_count = 0;
  /// Dependency measure; for a self loop (a,a) the length-one loop measure.
  double dependency = 0;
  /// Kept only because of all-tasks-connected.
  bool forced = false;

  bool operator==(const DependencyEdge&) const = default;
};

struct DependencyGraph {
  std::set<std::string> activities;
  std::map<ActivityPair, DependencyEdge> edges;
  /// Activities with |a>a| > 0.
  std::map<std::string, double> l1_loops;
  /// Unordered pairs stored once with first < second; |a>>b| + |b>>a| > 0.
  std::map<ActivityPair, double> l2_loops;
  /// Present only when long-distance mining is enabled.
  std::map<ActivityPair, double> long_distance;
  std::map<std::string, std::uint64_t> start_activities;
  std::map<std::string, std::uint64_t> end_activities;

  bool has_edge(const std::string& a, const std::string& b) const { return edges.count({a, b}) > 0; }
  double l2_loop(const std::string& a, const std::string& b) const;

  bool operator==(const DependencyGraph&) const = default;
};

struct MiningThresholds {
  double dependency_threshold = 0.5;
  std::uint64_t frequency_threshold = 1;
  bool all_tasks_connected = false;
  /// Enables long-distance dependencies from eventually-follows counts.
  std::optional<double> long_distance_threshold;

  void validate() const;
};

/// Edge (a,b) iff df(a,b) >= max(1, frequency_threshold), measure > 0 and
/// measure >= dependency_threshold. Throws DataError on an empty log.
DependencyGraph mine_dependency_graph(const EventLog& log, const MiningThresholds& th);

/// Counts |a>>b| (patterns a,b,a with a != b) over the log.
PairCounts length_two_loop_counts(const EventLog& log);

enum class FilterMode { kStrict, kPermissive };
enum class RemovalReason { kNotEntailed, kContradicted };

struct RemovedEdge {
  ActivityPair edge;
  RemovalReason reason = RemovalReason::kNotEntailed;
  /// Entailed fact behind a contradiction, e.g. must_precede(b, a).
  std::optional<Triple> fact;
  /// Rule that derived the fact; empty when the fact is stored or absent.
  std::string rule_id;
};

struct FilterReport {
  std::vector<RemovedEdge> removed_edges;
  std::size_t kept_edges = 0;
  FilterMode mode = FilterMode::kPermissive;
};

/// Strict: keep (a,b) only if directly_follows(alias a, alias b) is entailed.
/// Permissive: drop (a,b) only if must_precede(b,a) or forbidden_before(a,b) is
/// entailed. Edges touching an unmapped activity are kept in both modes.
std::pair<DependencyGraph, FilterReport> filter_dependency_graph(const DependencyGraph& dg,
                                                                 const InferenceClosure& closure,
                                                                 const KnowledgeGraph& kg,
                                                                 const AliasMap& alias, FilterMode mode);

std::pair<DependencyGraph, FilterReport> filter_dependency_graph(const DependencyGraph& dg,
                                                                 const RuleBase& rb,
                                                                 const KnowledgeGraph& kg,
                                                                 const AliasMap& alias, FilterMode mode);

std::string to_string(FilterMode m);
std::string to_string(RemovalReason r);
std::optional<FilterMode> parse_filter_mode(const std::string& s);

std::string dependency_graph_to_json(const DependencyGraph& dg);
DependencyGraph dependency_graph_from_json(const std::string& text);
/// Edge labels are `count/measure`.
void write_dependency_dot(std::ostream& out, const DependencyGraph& dg);

std::string filter_report_to_json(const FilterReport& report);
void write_filter_report_table(std::ostream& out, const FilterReport& report);

}  // namespace kcpm
