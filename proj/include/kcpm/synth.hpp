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
#include <map>
#include <set>
#include <string>

#include "kcpm/dependency_mining.hpp"
#include "kcpm/event_log.hpp"

namespace kcpm {

/// Markov chain over activities. Each activity's outgoing transition
/// probabilities plus its end probability sum to one.
struct GroundTruthModel {
  std::set<std::string> activities;
  std::map<std::string, double> start;
  std::map<std::string, std::map<std::string, double>> transitions;
  std::map<std::string, double> end;

  /// Throws ConfigError on bad probabilities or unknown activities.
  void validate() const;
  /// Edges with positive probability; no measures.
  DependencyGraph graph() const;

  bool operator==(const GroundTruthModel&) const = default;
};

std::string ground_truth_to_json(const GroundTruthModel& m);
/// `{"activities":[..], "start":{a:p}, "transitions":{a:{b:p}}, "end":{a:p}}`
GroundTruthModel ground_truth_from_json(const std::string& text);

inline constexpr std::size_t kMaxSimulatedLength = 200;
inline constexpr const char* kTruncatedAttribute = "truncated";
inline constexpr const char* kInjectedAttribute = "injected";

/// Random walks from a start activity until an end draw. Traces reaching
/// kMaxSimulatedLength stop there with trace attribute `truncated=true`.
/// Throws DataError when some reachable activity cannot reach an end.
EventLog simulate(const GroundTruthModel& model, std::size_t n_cases, std::uint64_t seed);

struct CorruptionSpec {
  double drop_rate = 0;
  double noise_rate = 0;
  std::set<std::string> noise_alphabet;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Drops each event with drop_rate, then inserts Binomial(len, noise_rate)
/// noise events at uniform positions, tagged `injected=true`. Empty traces
/// are removed.
EventLog corrupt(const EventLog& log, const CorruptionSpec& spec);

}  // namespace kcpm
