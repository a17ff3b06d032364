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

#include "kcpm/knowledge_graph.hpp"

namespace kcpm {
namespace {

KnowledgeGraph tsv(const std::string& text) {
  std::istringstream in(text);
  return load_triples(in, TripleFormat::kTsv);
}

KnowledgeGraph example() {
  return KnowledgeGraph({{"al", "worksAt", "uow"}, {"uow", "locatedIn", "wgg"}, {"al", "livesIn", "wgg"}});
}

TEST(LoadTriples, DuplicateRowsCollapse) {
  EXPECT_EQ(tsv("a\tp\tb\na\tp\tb\n").size(), 1u);
}

TEST(LoadTriples, FourColumnsIsTemporal) {
  KnowledgeGraph kg = tsv("A\tdirectly_follows\tB\t2014-10-22T11:15:41Z\n");
  ASSERT_EQ(kg.temporal().size(), 1u);
  EXPECT_EQ(kg.temporal()[0].timestamp, *parse_iso8601("2014-10-22T11:15:41Z"));
  EXPECT_TRUE(kg.contains({"A", "directly_follows", "B"}));
}

TEST(LoadTriples, EmptyFile) {
  EXPECT_TRUE(tsv("").empty());
  EXPECT_TRUE(tsv("# comment only\n\n").empty());
}

TEST(LoadTriples, WrongColumnCountNamesLine) {
  try {
    tsv("a\tp\tb\na\tp\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LoadTriples, NTriplesSubset) {
  std::istringstream in(
      "<http://x/al> <http://x/worksAt> <http://x/uow> .\n"
      "<http://x/al> <http://x/name> \"Al\" .\n");
  KnowledgeGraph kg = load_triples(in, TripleFormat::kNTriples);
  EXPECT_EQ(kg.size(), 2u);
  std::istringstream bad("<a> <b> .\n");
  EXPECT_THROW(load_triples(bad, TripleFormat::kNTriples), ParseError);
}

TEST(LoadTriples, TsvRoundTrip) {
  KnowledgeGraph kg = tsv("a\tp\tb\nA\tq\tB\t2014-10-22T11:15:41Z\n");
  std::ostringstream out;
  write_triples_tsv(out, kg);
  KnowledgeGraph again = tsv(out.str());
  EXPECT_EQ(again.triples(), kg.triples());
  EXPECT_EQ(again.temporal(), kg.temporal());
}

TEST(Query, Patterns) {
  KnowledgeGraph kg = example();
  auto located = kg.query({std::nullopt, "locatedIn", std::nullopt});
  ASSERT_EQ(located.size(), 1u);
  EXPECT_EQ(located[0], (Triple{"uow", "locatedIn", "wgg"}));
  EXPECT_EQ(kg.query({"al", "worksAt", "uow"}).size(), 1u);
  EXPECT_EQ(kg.query({}), kg.triples());
  EXPECT_TRUE(kg.query({"nobody", std::nullopt, std::nullopt}).empty());
}

TEST(Query, IndexesAndEntities) {
  KnowledgeGraph kg = example();
  EXPECT_EQ(kg.by_subject("al").size(), 2u);
  EXPECT_EQ(kg.by_object("wgg").size(), 2u);
  EXPECT_TRUE(kg.by_predicate("missing").empty());
  EXPECT_EQ(kg.entities(), (std::vector<std::string>{"al", "uow", "wgg"}));
  EXPECT_EQ(kg.predicates(), (std::vector<std::string>{"livesIn", "locatedIn", "worksAt"}));
  EXPECT_EQ(kg.with({{"bo", "worksAt", "unr"}}).size(), 4u);
}

TEST(Alias, ExplicitThenIdentity) {
  KnowledgeGraph kg({{"ER_Triage", "precedes", "IV_Antibiotics"}});
  AliasMap alias(std::map<std::string, std::string>{{"ER Triage", "ER_Triage"}});
  EXPECT_EQ(alias.resolve("ER Triage", kg), "ER_Triage");
  EXPECT_EQ(alias.resolve("IV_Antibiotics", kg), "IV_Antibiotics");
  EXPECT_FALSE(alias.resolve("Release A", kg));
  EXPECT_EQ(alias.activity_for("ER_Triage"), "ER Triage");
}

EventLog two_events() {
  Trace t;
  t.case_id = "c1";
  Instant ts = *parse_iso8601("2024-01-01T00:00:00Z");
  t.events.push_back({"c1", "a", ts, std::nullopt, {}});
  t.events.push_back({"c1", "b", ts + std::chrono::minutes(5), std::nullopt, {}});
  return EventLog({t});
}

TEST(Lpg, SingleTraceEmptyKg) {
  LabeledPropertyGraph g = build_lpg(two_events(), {});
  EXPECT_EQ(g.count_label("Event"), 2u);
  EXPECT_EQ(g.count_label("Case"), 1u);
  EXPECT_EQ(g.count_label("Activity"), 2u);
  EXPECT_EQ(g.nodes().size(), 5u);
  EXPECT_EQ(g.edges().size(), 5u);
  std::size_t df = 0;
  for (const auto& e : g.edges()) df += e.labels.count("DF");
  EXPECT_EQ(df, 1u);
  EXPECT_EQ(g.case_events("c1").size(), 2u);
}

TEST(Lpg, EmptyLogOneTriple) {
  LabeledPropertyGraph g = build_lpg(EventLog(), KnowledgeGraph({{"x", "p", "y"}}));
  EXPECT_EQ(g.count_label("Entity"), 2u);
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges()[0].labels, (std::set<std::string>{"p"}));
}

TEST(Lpg, ActivityMergesWithEntity) {
  Trace t;
  t.case_id = "c1";
  t.events.push_back({"c1", "ER Triage", *parse_iso8601("2024-01-01T00:00:00Z"), std::nullopt, {}});
  KnowledgeGraph kg({{"ER Triage", "precedes", "IV Antibiotics"}});
  LabeledPropertyGraph g = build_lpg(EventLog({t}), kg);
  auto n = g.find(lpg_id::entity("ER Triage"));
  ASSERT_TRUE(n);
  EXPECT_EQ(g.nodes()[*n].labels, (std::set<std::string>{"Activity", "Entity"}));
  EXPECT_FALSE(g.find(lpg_id::activity("ER Triage")));
}

TEST(Lpg, ResourcesAndAttributeNodes) {
  Trace t;
  t.case_id = "c1";
  t.events.push_back({"c1", "a", *parse_iso8601("2024-01-01T00:00:00Z"), std::string("nurse"),
                      {{"ward", std::string("north")}, {"cost", std::int64_t{3}}}});
  LpgOptions opt;
  opt.attribute_nodes = {"ward"};
  LabeledPropertyGraph g = build_lpg(EventLog({t}), {}, opt);
  EXPECT_EQ(g.count_label("Resource"), 1u);
  EXPECT_EQ(g.count_label("AttributeValue"), 1u);
  auto ev = g.find(lpg_id::event("c1", 0));
  ASSERT_TRUE(ev);
  EXPECT_EQ(std::get<std::int64_t>(g.nodes()[*ev].props.at("cost")), 3);
}

}  // namespace
}  // namespace kcpm
