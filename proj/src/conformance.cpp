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

#include "kcpm/conformance.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>
#include <ostream>

#include "csv.hpp"

namespace kcpm {

std::string symbol(Footprint f) {
  switch (f) {
    case Footprint::kCausal: return "->";
    case Footprint::kReverse: return "<-";
    case Footprint::kParallel: return "||";
    case Footprint::kUnrelated: break;
  }
  return "#";
}

FootprintMatrix::FootprintMatrix(std::set<std::string> activities, const std::set<ActivityPair>& follows)
    : activities_(activities.begin(), activities.end()) {
  const std::size_t n = activities_.size();
  cells_.assign(n * n, Footprint::kUnrelated);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool ab = follows.count({activities_[i], activities_[j]}) > 0;
      bool ba = follows.count({activities_[j], activities_[i]}) > 0;
      cells_[i * n + j] = ab && ba ? Footprint::kParallel
                          : ab     ? Footprint::kCausal
                          : ba     ? Footprint::kReverse
                                   : Footprint::kUnrelated;
    }
}

std::size_t FootprintMatrix::index(const std::string& a) const {
  auto it = std::lower_bound(activities_.begin(), activities_.end(), a);
  if (it == activities_.end() || *it != a) return activities_.size();
  return static_cast<std::size_t>(it - activities_.begin());
}

Footprint FootprintMatrix::relation(const std::string& a, const std::string& b) const {
  std::size_t i = index(a), j = index(b), n = activities_.size();
  if (i == n || j == n) return Footprint::kUnrelated;
  return cells_[i * n + j];
}

FootprintMatrix FootprintMatrix::extended(const std::set<std::string>& alphabet) const {
  std::set<std::string> all(activities_.begin(), activities_.end());
  all.insert(alphabet.begin(), alphabet.end());
  std::set<ActivityPair> follows;
  for (const auto& a : activities_)
    for (const auto& b : activities_) {
      Footprint f = relation(a, b);
      if (f == Footprint::kCausal || f == Footprint::kParallel) follows.insert({a, b});
    }
  return FootprintMatrix(std::move(all), follows);
}

FootprintMatrix footprint_of_log(const EventLog& log) {
  if (log.empty()) throw DataError("cannot build a footprint from an empty log");
  std::set<ActivityPair> follows;
  for (const auto& [pair, n] : directly_follows_counts(log))
    if (n > 0) follows.insert(pair);
  return FootprintMatrix(log.alphabet(), follows);
}

FootprintMatrix footprint_of_model(const DependencyGraph& dg) {
  std::set<ActivityPair> follows;
  std::set<std::string> acts = dg.activities;
  for (const auto& [pair, e] : dg.edges) {
    follows.insert(pair);
    acts.insert(pair.first);
    acts.insert(pair.second);
  }
  return FootprintMatrix(std::move(acts), follows);
}

double f_score(double fitness, double precision) {
  if (fitness <= 0 || precision <= 0) return 0.0;
  return 2.0 * fitness * precision / (fitness + precision);
}

ConformanceReport conformance(const FootprintMatrix& log_fp, const FootprintMatrix& model_fp) {
  std::set<std::string> alphabet(log_fp.activities().begin(), log_fp.activities().end());
  alphabet.insert(model_fp.activities().begin(), model_fp.activities().end());
  auto follows = [](Footprint f) { return f == Footprint::kCausal || f == Footprint::kParallel; };

  ConformanceReport r;
  std::size_t in_log = 0, in_model = 0, both = 0;
  for (const auto& a : alphabet)
    for (const auto& b : alphabet) {
      Footprint l = log_fp.relation(a, b), m = model_fp.relation(a, b);
      bool fl = follows(l), fm = follows(m);
      in_log += fl;
      in_model += fm;
      both += fl && fm;
      if (l != m) r.deviations.push_back({{a, b}, l, m});
    }
  r.fitness = in_log ? static_cast<double>(both) / static_cast<double>(in_log) : 1.0;
  r.precision = in_model ? static_cast<double>(both) / static_cast<double>(in_model) : 1.0;
  r.f_score = f_score(r.fitness, r.precision);
  return r;
}

void write_footprint_table(std::ostream& out, const FootprintMatrix& fp) {
  const auto& acts = fp.activities();
  std::size_t w = 2;
  for (const auto& a : acts) w = std::max(w, a.size());
  auto pad = [&](const std::string& s) { return s + std::string(w - std::min(w, s.size()), ' '); };
  out << pad("") << " |";
  for (const auto& a : acts) out << ' ' << pad(a);
  out << '\n';
  for (const auto& a : acts) {
    out << pad(a) << " |";
    for (const auto& b : acts) out << ' ' << pad(symbol(fp.relation(a, b)));
    out << '\n';
  }
}

void write_footprint_csv(std::ostream& out, const FootprintMatrix& fp) {
  std::vector<std::string> row{""};
  for (const auto& a : fp.activities()) row.push_back(csv::escape(a));
  csv::write_row(out, row);
  for (const auto& a : fp.activities()) {
    row = {csv::escape(a)};
    for (const auto& b : fp.activities()) row.push_back(symbol(fp.relation(a, b)));
    csv::write_row(out, row);
  }
}

std::string conformance_to_json(const ConformanceReport& r) {
  nlohmann::json j;
  j["fitness"] = r.fitness;
  j["precision"] = r.precision;
  j["f_score"] = r.f_score;
  j["deviations"] = nlohmann::json::array();
  for (const auto& d : r.deviations)
    j["deviations"].push_back(
        {{"a", d.pair.first}, {"b", d.pair.second}, {"log", symbol(d.log_relation)}, {"model", symbol(d.model_relation)}});
  return j.dump(2);
}

void write_conformance_table(std::ostream& out, const std::vector<TableRow>& rows) {
  std::size_t w = std::string("Event Log Type").size();
  for (const auto& r : rows) w = std::max(w, r.label.size());
  auto pad = [&](const std::string& s) { return s + std::string(w - s.size(), ' '); };
  out << pad("Event Log Type") << " | Fitness | Precision | F-Score\n";
  out << std::string(w, '-') << "-+---------+-----------+--------\n";
  for (const auto& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " | %7.3f | %9.3f | %7.3f\n", r.report.fitness, r.report.precision,
                  r.report.f_score);
    out << pad(r.label) << buf;
  }
}

}  // namespace kcpm
