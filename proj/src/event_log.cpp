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

#include "kcpm/event_log.hpp"

#include <algorithm>
#include <json.hpp>
#include <limits>
#include <unordered_map>

namespace kcpm {

EventLog::EventLog(std::vector<Trace> traces, Attributes meta)
    : traces_(std::move(traces)), meta_(std::move(meta)) {
  for (std::size_t t = 0; t < traces_.size(); ++t) {
    Trace& trace = traces_[t];
    if (trace.case_id.empty()) throw DataError("trace " + std::to_string(t) + " has an empty case id");
    if (trace.events.empty()) throw DataError("trace '" + trace.case_id + "' has no events");
    if (!index_.emplace(trace.case_id, t).second)
      throw DataError("duplicate case id '" + trace.case_id + "'");
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
      Event& e = trace.events[i];
      if (e.case_id.empty()) e.case_id = trace.case_id;
      if (e.case_id != trace.case_id)
        throw DataError("event " + std::to_string(i) + " of trace '" + trace.case_id +
                        "' carries case id '" + e.case_id + "'");
      if (trim(e.activity).empty())
        throw DataError("event " + std::to_string(i) + " of trace '" + trace.case_id +
                        "' has an empty activity");
    }
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    for (const Event& e : trace.events) alphabet_.insert(e.activity);
  }
}

std::size_t EventLog::event_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : traces_) n += t.events.size();
  return n;
}

const Trace* EventLog::find(const std::string& case_id) const {
  auto it = index_.find(case_id);
  return it == index_.end() ? nullptr : &traces_[it->second];
}

PairCounts directly_follows_counts(const EventLog& log) {
  PairCounts counts;
  for (const Trace& trace : log.traces()) {
    const auto& ev = trace.events;
    for (std::size_t i = 0; i + 1 < ev.size(); ++i) ++counts[{ev[i].activity, ev[i + 1].activity}];
  }
  return counts;
}

PairCounts eventually_follows_counts(const EventLog& log) {
  PairCounts counts;
  for (const Trace& trace : log.traces()) {
    // Occurrences so far of each activity; every new position pairs with all of them.
    std::map<std::string, std::uint64_t> seen;
    for (const Event& e : trace.events) {
      for (const auto& [prev, n] : seen) counts[{prev, e.activity}] += n;
      ++seen[e.activity];
    }
  }
  return counts;
}

std::pair<EventLog, AnnotationReport> annotate_context(const EventLog& log,
                                                       const ContextTable& ctx) {
  AnnotationReport report;
  std::vector<Trace> traces = log.traces();
  for (Trace& trace : traces) {
    auto row = ctx.rows.find(trace.case_id);
    if (row == ctx.rows.end()) {
      ++report.unmatched_cases;
      continue;
    }
    ++report.matched_cases;
    for (Event& e : trace.events)
      for (const auto& [k, v] : row->second) e.attributes.try_emplace(k, v);
  }
  for (const auto& [case_id, attrs] : ctx.rows)
    if (!log.find(case_id)) ++report.unused_rows;
  return {EventLog(std::move(traces), log.meta()), report};
}

LogStats compute_stats(const EventLog& log) {
  LogStats s;
  s.cases = log.case_count();
  s.events = log.event_count();
  s.activities = log.alphabet().size();
  std::set<std::vector<std::string>> variants;
  s.min_trace_length = log.empty() ? 0 : std::numeric_limits<std::size_t>::max();
  for (const Trace& t : log.traces()) {
    std::vector<std::string> seq;
    seq.reserve(t.events.size());
    for (const Event& e : t.events) {
      ++s.activity_frequency[e.activity];
      seq.push_back(e.activity);
    }
    ++s.start_activities[t.events.front().activity];
    ++s.end_activities[t.events.back().activity];
    s.min_trace_length = std::min(s.min_trace_length, t.events.size());
    s.max_trace_length = std::max(s.max_trace_length, t.events.size());
    variants.insert(std::move(seq));
  }
  s.variants = variants.size();
  s.mean_trace_length = s.cases ? static_cast<double>(s.events) / static_cast<double>(s.cases) : 0.0;
  return s;
}

std::string stats_to_json(const LogStats& s) {
  nlohmann::json j;
  j["cases"] = s.cases;
  j["events"] = s.events;
  j["activities"] = s.activities;
  j["variants"] = s.variants;
  j["trace_length"] = {{"min", s.min_trace_length},
                       {"max", s.max_trace_length},
                       {"mean", s.mean_trace_length}};
  j["activity_frequency"] = s.activity_frequency;
  j["start_activities"] = s.start_activities;
  j["end_activities"] = s.end_activities;
  return j.dump(2);
}

}  // namespace kcpm
