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

#include "kcpm/conformance.hpp"

namespace kcpm {
namespace {

EventLog seqs(std::vector<std::vector<std::string>> traces) {
  std::vector<Trace> out;
  for (std::size_t c = 0; c < traces.size(); ++c) {
    Trace t;
    t.case_id = "c" + std::to_string(c);
    Instant ts = *parse_iso8601("2024-01-01T00:00:00Z");
    for (const auto& a : traces[c]) {
      ts += std::chrono::seconds(1);
      t.events.push_back({t.case_id, a, ts, std::nullopt, {}});
    }
    out.push_back(std::move(t));
  }
  return EventLog(std::move(out));
}

DependencyGraph graph(std::set<std::string> acts, std::vector<ActivityPair> edges) {
  DependencyGraph dg;
  dg.activities = std::move(acts);
  for (const auto& e : edges) dg.edges[e] = {1, 0.5, false};
  return dg;
}

TEST(Footprint, FromLog) {
  FootprintMatrix fp = footprint_of_log(seqs({{"a", "b"}}));
  EXPECT_EQ(fp.relation("a", "b"), Footprint::kCausal);
  EXPECT_EQ(fp.relation("b", "a"), Footprint::kReverse);
  EXPECT_EQ(fp.relation("a", "a"), Footprint::kUnrelated);
  EXPECT_EQ(footprint_of_log(seqs({{"a", "b"}, {"b", "a"}})).relation("a", "b"), Footprint::kParallel);
  EXPECT_EQ(fp.relation("a", "zzz"), Footprint::kUnrelated);
  EXPECT_THROW(footprint_of_log(EventLog()), DataError);
}

TEST(Footprint, FromModel) {
  EXPECT_EQ(footprint_of_model(graph({"a", "b"}, {{"a", "b"}})).relation("a", "b"), Footprint::kCausal);
  EXPECT_EQ(footprint_of_model(graph({"a", "b"}, {{"a", "b"}, {"b", "a"}})).relation("a", "b"), Footprint::kParallel);
  FootprintMatrix empty = footprint_of_model(graph({"a", "b"}, {}));
  for (const char* x : {"a", "b"})
    for (const char* y : {"a", "b"}) EXPECT_EQ(empty.relation(x, y), Footprint::kUnrelated);
}

TEST(Footprint, Extended) {
  FootprintMatrix fp = footprint_of_log(seqs({{"a", "b"}})).extended({"a", "b", "c"});
  EXPECT_EQ(fp.activities().size(), 3u);
  EXPECT_EQ(fp.relation("a", "b"), Footprint::kCausal);
  EXPECT_EQ(fp.relation("c", "a"), Footprint::kUnrelated);
}

TEST(Conformance, Identity) {
  FootprintMatrix fp = footprint_of_log(seqs({{"a", "b", "c"}, {"a", "c"}}));
  ConformanceReport r = conformance(fp, fp);
  EXPECT_DOUBLE_EQ(r.fitness, 1.0);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.f_score, 1.0);
  EXPECT_TRUE(r.deviations.empty());
}

TEST(Conformance, CountsFollowPairs) {
  // Log follows: ab, bc. Model follows: ab, ac.
  FootprintMatrix log = footprint_of_log(seqs({{"a", "b", "c"}}));
  FootprintMatrix model = footprint_of_model(graph({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}}));
  ConformanceReport r = conformance(log, model);
  EXPECT_DOUBLE_EQ(r.fitness, 0.5);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.f_score, 0.5);
  // (a,c), (c,a), (b,c), (c,b) differ.
  EXPECT_EQ(r.deviations.size(), 4u);
}

TEST(Conformance, TableOneFScores) {
  EXPECT_NEAR(f_score(0.794, 0.573), 0.665, 0.001);
  EXPECT_NEAR(f_score(0.903, 0.671), 0.769, 0.001);
  EXPECT_DOUBLE_EQ(f_score(0, 0), 0.0);
}

TEST(Conformance, TableOutput) {
  std::ostringstream out;
  ConformanceReport r;
  r.fitness = 0.794;
  r.precision = 0.573;
  r.f_score = f_score(r.fitness, r.precision);
  write_conformance_table(out, {{"Raw event log", r}});
  EXPECT_NE(out.str().find("Raw event log"), std::string::npos);
  EXPECT_NE(out.str().find("0.794"), std::string::npos);
  EXPECT_NE(out.str().find("0.666"), std::string::npos);
}

}  // namespace
}  // namespace kcpm
