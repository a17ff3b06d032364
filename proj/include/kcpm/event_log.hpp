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
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kcpm/common.hpp"

namespace kcpm {

struct Event {
  std::string case_id;
  std::string activity;
  Instant timestamp{};
  std::optional<std::string> resource;
  Attributes attributes;

  bool operator==(const Event&) const = default;
};

struct Trace {
  std::string case_id;
  std::vector<Event> events;
  /// Trace-level attributes other than the case name.
  Attributes attributes;

  std::size_t size() const noexcept { return events.size(); }
  bool operator==(const Trace&) const = default;
};

/// Immutable log. Construction enforces the trace invariants: non-empty
/// traces, distinct case ids, events carrying their trace's case id and
/// stable-sorted by timestamp.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::vector<Trace> traces, Attributes meta = {});

  const std::vector<Trace>& traces() const noexcept { return traces_; }
  const std::set<std::string>& alphabet() const noexcept { return alphabet_; }
  const Attributes& meta() const noexcept { return meta_; }

  std::size_t case_count() const noexcept { return traces_.size(); }
  std::size_t event_count() const noexcept;
  bool empty() const noexcept { return traces_.empty(); }

  /// nullptr when the case is absent.
  const Trace* find(const std::string& case_id) const;

  bool operator==(const EventLog& o) const { return traces_ == o.traces_; }

 private:
  std::vector<Trace> traces_;
  std::set<std::string> alphabet_;
  Attributes meta_;
  std::map<std::string, std::size_t> index_;
};

using ActivityPair = std::pair<std::string, std::string>;
using PairCounts = std::map<ActivityPair, std::uint64_t>;

/// count(a,b) = positions i with trace[i] = a and trace[i+1] = b.
PairCounts directly_follows_counts(const EventLog& log);

/// count(a,b) = ordered position pairs i < j within a trace with activities (a,b).
PairCounts eventually_follows_counts(const EventLog& log);

/// Exogenous per-case attributes keyed by case id.
struct ContextTable {
  std::map<std::string, Attributes> rows;
};

struct AnnotationReport {
  std::size_t matched_cases = 0;
  /// Log cases with no context row.
  std::size_t unmatched_cases = 0;
  /// Context rows naming no case of the log.
  std::size_t unused_rows = 0;
};

/// Copies each case's context attributes onto its events. Existing event
/// attributes win on key collision.
std::pair<EventLog, AnnotationReport> annotate_context(const EventLog& log,
                                                       const ContextTable& ctx);

struct LogStats {
  std::size_t cases = 0;
  std::size_t events = 0;
  std::size_t activities = 0;
  std::size_t variants = 0;
  std::size_t min_trace_length = 0;
  std::size_t max_trace_length = 0;
  double mean_trace_length = 0;
  std::map<std::string, std::uint64_t> activity_frequency;
  std::map<std::string, std::uint64_t> start_activities;
  std::map<std::string, std::uint64_t> end_activities;
};

LogStats compute_stats(const EventLog& log);
std::string stats_to_json(const LogStats& stats);

// I/O -------------------------------------------------------------------------

enum class MalformedEventPolicy { kFail, kSkip };

struct XesOptions {
  MalformedEventPolicy on_malformed = MalformedEventPolicy::kFail;
};

/// IEEE XES reader. Throws ParseError on malformed XML and DataError naming
/// the trace and event index when an event lacks concept:name or
/// time:timestamp (unless the policy is kSkip).
EventLog parse_xes(std::istream& in, const XesOptions& options = {});
void write_xes(std::ostream& out, const EventLog& log);

struct CsvMapping {
  std::string case_column = "case_id";
  std::string activity_column = "activity";
  std::string timestamp_column = "timestamp";
  std::optional<std::string> resource_column = std::string("resource");
  /// Extra attribute columns. Empty means every unmapped column.
  std::vector<std::string> attribute_columns;
  /// strptime(3) format, or "iso8601".
  std::string timestamp_format = "iso8601";
  char delimiter = ',';
};

/// RFC-4180 reader. Quoted fields are kept as strings; unquoted fields go
/// through type inference. Throws ConfigError for a missing mapped column and
/// ParseError with the row's line number for bad rows.
EventLog parse_csv(std::istream& in, const CsvMapping& mapping = {});

/// Writes `case_id,activity,timestamp,resource,<attributes...>` so that
/// parse_csv with the default mapping restores an equal log.
void write_csv(std::ostream& out, const EventLog& log);

/// Context table CSV with a `case_id` column; other columns are attributes.
ContextTable parse_context_csv(std::istream& in);

}  // namespace kcpm
