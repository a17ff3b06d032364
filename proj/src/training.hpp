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

// Training objectives before optimisation. Internal; tests use these for
// gradient checks.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "kcpm/augmentation.hpp"
#include "kcpm/variant_analysis.hpp"
#include "optim.hpp"

namespace kcpm::detail {

struct ScorerProblem {
  std::vector<std::string> vocab;
  std::size_t off_rel = 0, off_time = 0;
  std::vector<double> theta;  // initial parameters
  optim::Objective objective;
};

ScorerProblem scorer_problem(const EventLog& log, const KnowledgeGraph& kg, const ScorerParams& p);

struct VariantProblem {
  VariantModel model;  // everything but the parameter blocks
  /// Block offsets: ent, ent_proj, rel, rel_proj, cls, att, end.
  std::array<std::size_t, 7> blocks{};
  std::vector<double> theta;
  optim::Objective objective;
};

}  // namespace kcpm::detail
