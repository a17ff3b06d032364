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

// Random instances for property and oracle tests.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kcpm/event_log.hpp"
#include "kcpm/knowledge_graph.hpp"

namespace kcpm::testing {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);  // inclusive
bool coin(Rng& rng, double p = 0.5);

/// "a", "b", ... then "a1", "b1", ...
std::string activity_name(int i);

struct LogShape {
  int max_activities = 8;
  int max_traces = 20;
  int max_length = 15;
  bool resources = false;
  bool attributes = false;
};

/// Non-empty log; timestamps strictly increase within a trace.
EventLog random_log(Rng& rng, const LogShape& shape = {});

struct KgShape {
  int max_triples = 50;
  int max_predicates = 6;
  int max_entities = 8;
};

KnowledgeGraph random_kg(Rng& rng, const KgShape& shape = {});

Instant base_time();

}  // namespace kcpm::testing
