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


#include <gtest/gtest.h>

#include <sstream>

#include "kcpm/dependency_mining.hpp"

namespace kcpm {
namespace {

EventLog seqs(std::vector<std::vector<std::string>> traces) {
  std::vector<Trace> out;
  for (std::size_t c = 0; c < traces.size(); ++c) {
    Trace t;
    t.case_id = "c" + std::to_string(c);
    Instant ts = *parse_iso8601("2024-01-01T00:00:00Z");
    for (const auto& a : traces[c]) {
      ts += std::chrono::seconds(30);
      t.events.push_back({t.case_id, a, ts, std::nullopt, {}});
    }
    out.push_back(std::move(t));
  }
  return EventLog(std::move(out));
}

TEST(Measure, Examples) {
  EXPECT_DOUBLE_EQ(dependency_measure(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(dependency_measure(3, 3), 0.0);
  EXPECT_NEAR(dependency_measure(5, 0), 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(dependency_measure(0, 5), -5.0 / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(length_one_loop_measure(3), 0.75);
}

TEST(Mine, SingleDominantEdge) {
  DependencyGraph dg = mine_dependency_graph(seqs(std::vector<std::vector<std::string>>(5, {"a", "b"})), {});
  ASSERT_EQ(dg.edges.size(), 1u);
  ASSERT_TRUE(dg.has_edge("a", "b"));
  EXPECT_NEAR(dg.edges.at({"a", "b"}).dependency, 5.0 / 6.0, 1e-12);
  EXPECT_EQ(dg.edges.at({"a", "b"}).df_count, 5u);
  EXPECT_EQ(dg.start_activities.at("a"), 5u);
  EXPECT_EQ(dg.end_activities.at("b"), 5u);
}

TEST(Mine, SymmetricPairCancels) {
  DependencyGraph dg = mine_dependency_graph(seqs({{"a", "b"}, {"b", "a"}}), {});
  EXPECT_TRUE(dg.edges.empty());
}

TEST(Mine, LengthTwoLoop) {
  // a,b,a occurs twice and b,a,b once in <a,b,a,b,a>, so (2+1)/(2+1+1).
  DependencyGraph dg = mine_dependency_graph(seqs({{"a", "b", "a", "b", "a"}}), {});
  EXPECT_DOUBLE_EQ(dg.l2_loop("a", "b"), 0.75);
  EXPECT_DOUBLE_EQ(dg.l2_loop("b", "a"), 0.75);
  PairCounts c = length_two_loop_counts(seqs({{"a", "b", "a", "b", "a"}}));
  EXPECT_EQ(c.at({"a", "b"}), 2u);
  EXPECT_EQ(c.at({"b", "a"}), 1u);
}

TEST(Mine, SelfLoop) {
  DependencyGraph dg = mine_dependency_graph(seqs({{"a", "a", "a", "a", "b"}}), {0.5, 1});
  EXPECT_DOUBLE_EQ(dg.l1_loops.at("a"), 0.75);
  EXPECT_TRUE(dg.has_edge("a", "a"));
}

TEST(Mine, FrequencyThreshold) {
  DependencyGraph dg = mine_dependency_graph(seqs({{"a", "b"}, {"a", "b"}, {"c", "d"}}), {0.1, 2});
  EXPECT_TRUE(dg.has_edge("a", "b"));
  EXPECT_FALSE(dg.has_edge("c", "d"));
}

TEST(Mine, AllTasksConnectedForcesEdges) {
  MiningThresholds th{0.9, 1, true};
  DependencyGraph dg = mine_dependency_graph(seqs({{"a", "b", "c"}, {"a", "c", "b"}}), th);
  bool any_forced = false;
  for (const auto& [p, e] : dg.edges) any_forced |= e.forced;
  EXPECT_TRUE(any_forced);
  for (const auto& a : dg.activities) {
    bool touched = false;
    for (const auto& [p, e] : dg.edges) touched |= (p.first == a || p.second == a);
    EXPECT_TRUE(touched) << a;
  }
}

TEST(Mine, LongDistance) {
  MiningThresholds th;
  th.long_distance_threshold = 0.5;
  DependencyGraph dg = mine_dependency_graph(seqs(std::vector<std::vector<std::string>>(4, {"a", "x", "b"})), th);
  EXPECT_GT(dg.long_distance.count({"a", "b"}), 0u);
}

TEST(Mine, Errors) {
  EXPECT_THROW(mine_dependency_graph(EventLog(), {}), DataError);
  EXPECT_THROW(mine_dependency_graph(seqs({{"a"}}), {1.5, 1}), ConfigError);
}

TEST(Json, RoundTrip) {
  DependencyGraph dg = mine_dependency_graph(seqs({{"a", "b", "a", "b", "c"}, {"a", "c"}}), {0.1, 1});
  EXPECT_EQ(dependency_graph_from_json(dependency_graph_to_json(dg)), dg);
}

DependencyGraph er_graph() {
  return mine_dependency_graph(seqs(std::vector<std::vector<std::string>>(3, {"ER_Triage", "ER_Registration", "Other"})),
                               {});
}

KnowledgeGraph er_kg() {
  return KnowledgeGraph({{"ER_Registration", "precedes", "ER_Triage"}, {"ER_Triage", "sameWard", "ER_Registration"}});
}

TEST(Filter, EmptyRulesPermissiveKeepsAll) {
  DependencyGraph dg = er_graph();
  auto [out, report] = filter_dependency_graph(dg, RuleBase(), er_kg(), {}, FilterMode::kPermissive);
  EXPECT_EQ(out, dg);
  EXPECT_TRUE(report.removed_edges.empty());
}

TEST(Filter, EmptyRulesStrictDropsMappedEdges) {
  DependencyGraph dg = er_graph();
  auto [out, report] = filter_dependency_graph(dg, RuleBase(), er_kg(), {}, FilterMode::kStrict);
  // ER_Triage and ER_Registration are entities; Other is not, so its edge stays.
  EXPECT_FALSE(out.has_edge("ER_Triage", "ER_Registration"));
  EXPECT_TRUE(out.has_edge("ER_Registration", "Other"));
  ASSERT_EQ(report.removed_edges.size(), 1u);
  EXPECT_EQ(report.removed_edges[0].reason, RemovalReason::kNotEntailed);
}

TEST(Filter, ContradictedEdgeRemoved) {
  ClosedPathRule r = ClosedPathRule::chain({"precedes"}, predicates::kMustPrecede);
  r.pca_confidence = 1.0;
  RuleBase rb({r}, {});
  auto [out, report] = filter_dependency_graph(er_graph(), rb, er_kg(), {}, FilterMode::kPermissive);
  EXPECT_FALSE(out.has_edge("ER_Triage", "ER_Registration"));
  ASSERT_EQ(report.removed_edges.size(), 1u);
  const RemovedEdge& e = report.removed_edges[0];
  EXPECT_EQ(e.reason, RemovalReason::kContradicted);
  EXPECT_EQ(*e.fact, (Triple{"ER_Registration", predicates::kMustPrecede, "ER_Triage"}));
  EXPECT_EQ(e.rule_id, r.id());
  EXPECT_EQ(report.kept_edges, out.edges.size());
}

TEST(Filter, AliasMapsActivityLabels) {
  DependencyGraph dg = mine_dependency_graph(seqs(std::vector<std::vector<std::string>>(3, {"ER Triage", "ER Registration"})), {});
  AliasMap alias({{"ER Triage", "ER_Triage"}, {"ER Registration", "ER_Registration"}});
  ClosedPathRule r = ClosedPathRule::chain({"precedes"}, predicates::kMustPrecede);
  r.pca_confidence = 1.0;
  auto [out, report] = filter_dependency_graph(dg, RuleBase({r}, {}), er_kg(), alias, FilterMode::kPermissive);
  EXPECT_TRUE(out.edges.empty());
}

TEST(Filter, ModeNames) {
  EXPECT_EQ(parse_filter_mode("strict"), FilterMode::kStrict);
  EXPECT_FALSE(parse_filter_mode("lenient"));
  EXPECT_EQ(to_string(FilterMode::kPermissive), "permissive");
}

}  // namespace
}  // namespace kcpm
