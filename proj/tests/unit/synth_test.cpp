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

#include <fstream>
#include <sstream>

#include "kcpm/synth.hpp"

namespace kcpm {
namespace {

GroundTruthModel linear() {
  GroundTruthModel m;
  m.activities = {"a", "b", "c"};
  m.start = {{"a", 1.0}};
  m.transitions = {{"a", {{"b", 1.0}}}, {"b", {{"c", 1.0}}}};
  m.end = {{"c", 1.0}};
  return m;
}

GroundTruthModel branch(double p) {
  GroundTruthModel m;
  m.activities = {"a", "b", "c", "d"};
  m.start = {{"a", 1.0}};
  m.transitions = {{"a", {{"b", p}, {"c", 1 - p}}}, {"b", {{"d", 1.0}}}, {"c", {{"d", 1.0}}}};
  m.end = {{"d", 1.0}};
  return m;
}

std::size_t count(const EventLog& log, const std::string& a) {
  std::size_t n = 0;
  for (const auto& t : log.traces())
    for (const auto& e : t.events) n += e.activity == a;
  return n;
}

TEST(Simulate, LinearModel) {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    EventLog log = simulate(linear(), 25, seed);
    ASSERT_EQ(log.case_count(), 25u);
    for (const auto& t : log.traces()) {
      ASSERT_EQ(t.size(), 3u);
      EXPECT_EQ(t.events[0].activity, "a");
      EXPECT_EQ(t.events[2].activity, "c");
      EXPECT_LT(t.events[0].timestamp, t.events[1].timestamp);
      EXPECT_LT(t.events[1].timestamp, t.events[2].timestamp);
    }
  }
}

TEST(Simulate, CertainBranch) {
  EventLog log = simulate(branch(1.0), 200, 4);
  EXPECT_EQ(count(log, "c"), 0u);
  EXPECT_EQ(count(log, "b"), 200u);
}

TEST(Simulate, BranchFrequency) {
  EventLog log = simulate(branch(0.5), 10000, 17);
  EXPECT_NEAR(static_cast<double>(count(log, "b")) / 10000.0, 0.5, 0.02);
}

TEST(Simulate, DeterministicPerSeedAndThreads) {
  set_thread_count(1);
  EventLog a = simulate(branch(0.3), 300, 5);
  set_thread_count(4);
  EventLog b = simulate(branch(0.3), 300, 5);
  set_thread_count(1);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, simulate(branch(0.3), 300, 6));
}

TEST(Simulate, TruncatesLongWalks) {
  GroundTruthModel m;
  m.activities = {"a"};
  m.start = {{"a", 1.0}};
  m.transitions = {{"a", {{"a", 0.999}}}};
  m.end = {{"a", 0.001}};
  EventLog log = simulate(m, 5, 1);
  bool flagged = false;
  for (const auto& t : log.traces()) {
    EXPECT_LE(t.size(), kMaxSimulatedLength);
    if (t.size() == kMaxSimulatedLength) {
      flagged = true;
      EXPECT_TRUE(std::get<bool>(t.attributes.at(kTruncatedAttribute)));
    }
  }
  EXPECT_TRUE(flagged);
}

TEST(Simulate, Errors) {
  GroundTruthModel stuck = linear();
  stuck.transitions["c"] = {{"b", 1.0}};
  stuck.end = {{"c", 0.0}};
  stuck.activities.insert("e");
  stuck.transitions["e"] = {};
  stuck.end["e"] = 1.0;
  EXPECT_THROW(simulate(stuck, 10, 1), DataError);
  GroundTruthModel bad = linear();
  bad.start["a"] = 0.5;
  EXPECT_THROW(simulate(bad, 10, 1), ConfigError);
  EXPECT_THROW(simulate(linear(), 0, 1), ConfigError);
}

TEST(Model, JsonRoundTripAndFixture) {
  EXPECT_EQ(ground_truth_from_json(ground_truth_to_json(branch(0.25))), branch(0.25));
  std::ifstream in(std::string(KCPM_TEST_DATA) + "/clinic/model.json");
  std::stringstream ss;
  ss << in.rdbuf();
  GroundTruthModel m = ground_truth_from_json(ss.str());
  EXPECT_EQ(m.activities.size(), 12u);
  EXPECT_EQ(m.graph().activities, m.activities);
}

TEST(Corrupt, IdentitySpec) {
  EventLog log = simulate(branch(0.5), 50, 1);
  EXPECT_EQ(corrupt(log, {}), log);
}

TEST(Corrupt, DropEverything) {
  CorruptionSpec s;
  s.drop_rate = 1.0;
  EXPECT_TRUE(corrupt(simulate(linear(), 30, 1), s).empty());
}

TEST(Corrupt, DropRateBinomial) {
  EventLog log = simulate(linear(), 5000, 2);
  ASSERT_EQ(log.event_count(), 15000u);
  CorruptionSpec s;
  s.drop_rate = 0.1;
  s.seed = 8;
  const double dropped = 15000.0 - static_cast<double>(corrupt(log, s).event_count());
  EXPECT_NEAR(dropped, 1500.0, 120.0);
}

TEST(Corrupt, NoiseIsMarked) {
  EventLog log = simulate(linear(), 400, 2);
  CorruptionSpec s;
  s.noise_rate = 0.2;
  s.noise_alphabet = {"x", "y"};
  s.seed = 3;
  EventLog noisy = corrupt(log, s);
  std::size_t marked = 0;
  for (const auto& t : noisy.traces())
    for (const auto& e : t.events) {
      const bool injected = e.attributes.count(kInjectedAttribute) > 0;
      EXPECT_EQ(injected, e.activity == "x" || e.activity == "y");
      marked += injected;
    }
  EXPECT_EQ(marked + log.event_count(), noisy.event_count());
  EXPECT_NEAR(static_cast<double>(marked), 240.0, 60.0);
  s.noise_alphabet.clear();
  EXPECT_THROW(corrupt(log, s), ConfigError);
}

}  // namespace
}  // namespace kcpm
