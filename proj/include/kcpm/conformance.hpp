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

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "kcpm/dependency_mining.hpp"
#include "kcpm/event_log.hpp"

namespace kcpm {

enum class Footprint : char { kCausal = '>', kReverse = '<', kParallel = '|', kUnrelated = '#' };

/// Glyph used in tables: "->", "<-", "||", "#".
std::string symbol(Footprint f);

class FootprintMatrix {
 public:
  FootprintMatrix() = default;
  /// Relations from a directed "follows" set over the given activities.
  FootprintMatrix(std::set<std::string> activities, const std::set<ActivityPair>& follows);

  const std::vector<std::string>& activities() const noexcept { return activities_; }
  /// # for pairs outside the alphabet.
  Footprint relation(const std::string& a, const std::string& b) const;
  /// Same relations over a larger alphabet.
  FootprintMatrix extended(const std::set<std::string>& alphabet) const;

  bool operator==(const FootprintMatrix&) const = default;

 private:
  std::size_t index(const std::string& a) const;
  std::vector<std::string> activities_;
  std::vector<Footprint> cells_;  // row-major
};

/// Throws DataError on an empty log.
FootprintMatrix footprint_of_log(const EventLog& log);
FootprintMatrix footprint_of_model(const DependencyGraph& dg);

struct Deviation {
  ActivityPair pair;
  Footprint log_relation;
  Footprint model_relation;
};

struct ConformanceReport {
  double fitness = 1.0;
  double precision = 1.0;
  double f_score = 1.0;
  std::vector<Deviation> deviations;
};

/// Harmonic mean; 0 unless both inputs are positive.
double f_score(double fitness, double precision);

/// Footprint-overlap fitness and precision over the union alphabet.
ConformanceReport conformance(const FootprintMatrix& log_fp, const FootprintMatrix& model_fp);

void write_footprint_table(std::ostream& out, const FootprintMatrix& fp);
void write_footprint_csv(std::ostream& out, const FootprintMatrix& fp);
std::string conformance_to_json(const ConformanceReport& report);

struct TableRow {
  std::string label;
  ConformanceReport report;
};
/// `Event Log Type | Fitness | Precision | F-Score`
void write_conformance_table(std::ostream& out, const std::vector<TableRow>& rows);

}  // namespace kcpm
