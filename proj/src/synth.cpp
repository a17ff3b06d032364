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

#include "kcpm/synth.hpp"

#include <cmath>
#include <deque>
#include <json.hpp>
#include <random>

namespace kcpm {

namespace {

constexpr double kTolerance = 1e-9;

void check_probability(double p, const std::string& what) {
  if (!(p >= 0 && p <= 1)) throw ConfigError(what + " must lie in [0, 1]");
}

// 2024-01-01T00:00:00Z
constexpr std::chrono::sys_days kEpoch{std::chrono::year{2024} / 1 / 1};

std::string case_name(std::size_t i, std::size_t n) {
  std::string digits = std::to_string(i);
  std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  return "case_" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

template <class Map, class Rng>
std::string draw(const Map& dist, double end_p, Rng& rng, bool* ended) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (ended) {
    if (u < end_p) {
      *ended = true;
      return {};
    }
    u -= end_p;
  }
  std::string last;
  for (const auto& [a, p] : dist) {
    if (p <= 0) continue;
    last = a;
    if (u < p) return a;
    u -= p;
  }
  if (ended && last.empty()) *ended = true;
  return last;  // rounding slack lands on the final positive entry
}

}  // namespace

void GroundTruthModel::validate() const {
  if (activities.empty()) throw ConfigError("ground-truth model has no activities");
  auto known = [&](const std::string& a) {
    if (!activities.count(a)) throw ConfigError("ground-truth model references unknown activity '" + a + "'");
  };
  double s = 0;
  for (const auto& [a, p] : start) {
    known(a);
    check_probability(p, "start probability of " + a);
    s += p;
  }
  if (std::fabs(s - 1.0) > kTolerance) throw ConfigError("start probabilities must sum to 1");
  for (const auto& [a, p] : end) {
    known(a);
    check_probability(p, "end probability of " + a);
  }
  for (const auto& [a, out] : transitions) known(a);
  for (const auto& a : activities) {
    double total = end.count(a) ? end.at(a) : 0.0;
    if (auto it = transitions.find(a); it != transitions.end())
      for (const auto& [b, p] : it->second) {
        known(b);
        check_probability(p, "transition probability " + a + "->" + b);
        total += p;
      }
    if (std::fabs(total - 1.0) > kTolerance)
      throw ConfigError("outgoing probabilities of '" + a + "' sum to " + std::to_string(total) + ", not 1");
  }
}

DependencyGraph GroundTruthModel::graph() const {
  DependencyGraph g;
  g.activities = activities;
  for (const auto& [a, out] : transitions)
    for (const auto& [b, p] : out)
      if (p > 0) g.edges[{a, b}] = DependencyEdge{};
  for (const auto& [a, p] : start)
    if (p > 0) g.start_activities[a] = 0;
  for (const auto& [a, p] : end)
    if (p > 0) g.end_activities[a] = 0;
  return g;
}

std::string ground_truth_to_json(const GroundTruthModel& m) {
  nlohmann::json j;
  j["activities"] = m.activities;
  j["start"] = m.start;
  j["transitions"] = nlohmann::json::object();
  for (const auto& [a, out] : m.transitions) j["transitions"][a] = out;
  j["end"] = m.end;
  return j.dump(2);
}

GroundTruthModel ground_truth_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("ground-truth model: ") + e.what(), 0, 0);
  }
  GroundTruthModel m;
  try {
    m.activities = j.at("activities").get<std::set<std::string>>();
    m.start = j.at("start").get<std::map<std::string, double>>();
    if (j.contains("transitions"))
      m.transitions = j.at("transitions").get<std::map<std::string, std::map<std::string, double>>>();
    if (j.contains("end")) m.end = j.at("end").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("ground-truth model: ") + e.what());
  }
  m.validate();
  return m;
}

EventLog simulate(const GroundTruthModel& model, std::size_t n_cases, std::uint64_t seed) {
  model.validate();
  if (n_cases == 0) throw ConfigError("n_cases must be at least 1");

  // Every activity reachable from a start must be able to reach an end.
  std::map<std::string, std::set<std::string>> preds;
  for (const auto& [a, out] : model.transitions)
    for (const auto& [b, p] : out)
      if (p > 0) preds[b].insert(a);
  std::set<std::string> can_end;
  std::deque<std::string> q;
  for (const auto& [a, p] : model.end)
    if (p > 0 && can_end.insert(a).second) q.push_back(a);
  for (; !q.empty(); q.pop_front())
    for (const auto& p : preds[q.front()])
      if (can_end.insert(p).second) q.push_back(p);
  std::set<std::string> reach;
  for (const auto& [a, p] : model.start)
    if (p > 0 && reach.insert(a).second) q.push_back(a);
  for (; !q.empty(); q.pop_front())
    if (auto it = model.transitions.find(q.front()); it != model.transitions.end())
      for (const auto& [b, p] : it->second)
        if (p > 0 && reach.insert(b).second) q.push_back(b);
  for (const auto& a : reach)
    if (!can_end.count(a)) throw DataError("no end activity is reachable from '" + a + "'");

  std::vector<Trace> traces(n_cases);
  parallel_for(n_cases, [&](std::size_t i) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> gap(1, 600);
    Trace& tr = traces[i];
    tr.case_id = case_name(i, n_cases);
    Instant t = kEpoch + std::chrono::hours(static_cast<long>(i % 24)) + std::chrono::days(static_cast<long>(i / 24));
    std::string a = draw(model.start, 0, rng, nullptr);
    while (true) {
      tr.events.push_back(Event{tr.case_id, a, t, std::nullopt, {}});
      if (tr.events.size() >= kMaxSimulatedLength) {
        tr.attributes[kTruncatedAttribute] = true;
        break;
      }
      bool ended = false;
      auto it = model.transitions.find(a);
      static const std::map<std::string, double> kNone;
      const double end_p = model.end.count(a) ? model.end.at(a) : 0.0;
      std::string next = draw(it == model.transitions.end() ? kNone : it->second, end_p, rng, &ended);
      if (ended) break;
      a = next;
      t += std::chrono::seconds(gap(rng));
    }
  });
  return EventLog(std::move(traces));
}

void CorruptionSpec::validate() const {
  check_probability(drop_rate, "drop_rate");
  check_probability(noise_rate, "noise_rate");
  if (noise_rate > 0 && noise_alphabet.empty()) throw ConfigError("noise_rate > 0 needs a noise alphabet");
}

EventLog corrupt(const EventLog& log, const CorruptionSpec& spec) {
  spec.validate();
  const std::vector<std::string> noise(spec.noise_alphabet.begin(), spec.noise_alphabet.end());
  const auto& in = log.traces();
  std::vector<Trace> out(in.size());
  parallel_for(in.size(), [&](std::size_t i) {
    std::mt19937_64 rng(spec.seed ^ static_cast<std::uint64_t>(i));
    std::bernoulli_distribution drop(spec.drop_rate);
    const Trace& src = in[i];
    Trace& tr = out[i];
    tr.case_id = src.case_id;
    tr.attributes = src.attributes;
    for (const auto& e : src.events)
      if (!drop(rng)) tr.events.push_back(e);
    std::binomial_distribution<std::size_t> count(src.events.size(), spec.noise_rate);
    const std::size_t k = spec.noise_rate > 0 ? count(rng) : 0;
    for (std::size_t n = 0; n < k; ++n) {
      const std::string& act = noise[std::uniform_int_distribution<std::size_t>(0, noise.size() - 1)(rng)];
      const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, tr.events.size())(rng);
      Instant t;
      if (tr.events.empty())
        t = src.events.front().timestamp;
      else if (pos == 0)
        t = tr.events.front().timestamp - std::chrono::seconds(1);
      else if (pos == tr.events.size())
        t = tr.events.back().timestamp + std::chrono::seconds(1);
      else
        t = tr.events[pos - 1].timestamp + (tr.events[pos].timestamp - tr.events[pos - 1].timestamp) / 2;
      Event e{src.case_id, act, t, std::nullopt, {{kInjectedAttribute, true}}};
      tr.events.insert(tr.events.begin() + static_cast<std::ptrdiff_t>(pos), std::move(e));
    }
  });
  std::vector<Trace> kept;
  for (auto& tr : out)
    if (!tr.events.empty()) kept.push_back(std::move(tr));
  return EventLog(std::move(kept), log.meta());
}

}  // namespace kcpm
