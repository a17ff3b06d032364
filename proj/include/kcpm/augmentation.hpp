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
#include <string>
#include <vector>

#include "kcpm/event_log.hpp"
#include "kcpm/knowledge_graph.hpp"
#include "kcpm/rule_mining.hpp"

namespace kcpm {

// Temporal scorer ---------------------------------------------------------------

struct ScorerParams {
  int dimension = 16;
  double margin = 1.0;
  double learning_rate = 0.05;
  int epochs = 100;
  int negatives = 5;
  std::uint64_t seed = 42;
  /// Equal slices of the UTC day; 24 gives hour-of-day buckets.
  int time_buckets = 24;

  void validate() const;
  bool operator==(const ScorerParams&) const = default;
};

/// directly_follows(head, tail | bucket) with its multiplicity.
struct TemporalFact {
  std::string head;
  std::string tail;
  int bucket = 0;
  double weight = 1;
};

int time_bucket(Instant t, int buckets);

/// DF occurrences of the log, bucketed by the predecessor's timestamp, plus
/// the graph's temporal directly_follows facts. Aggregated and sorted.
std::vector<TemporalFact> temporal_training_facts(const EventLog& log, const KnowledgeGraph& kg,
                                                  int buckets);

/// Translational temporal model: an activity `a` is followed by `b` at time
/// bucket k when emb(a) + rel + time(k) lies close to emb(b).
class TemporalScorer {
 public:
  const ScorerParams& params() const noexcept { return params_; }
  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }
  bool knows(const std::string& activity) const { return index_.count(activity) > 0; }
  const std::vector<double>& loss_history() const noexcept { return loss_history_; }

  /// ||emb(a) + rel + time(bucket(t)) - emb(b)||. Throws DataError for unknown activities.
  double distance(const std::string& a, const std::string& b, Instant t) const;
  double distance(const std::string& a, const std::string& b, int bucket) const;

  std::string to_json() const;
  static TemporalScorer from_json(const std::string& text);

  bool operator==(const TemporalScorer&) const = default;

 private:
  friend TemporalScorer train_temporal_scorer(const EventLog&, const KnowledgeGraph&, const ScorerParams&);
  std::size_t id(const std::string& a) const;

  ScorerParams params_;
  std::vector<std::string> vocab_;
  std::map<std::string, std::size_t> index_;
  std::vector<double> entity_;  // vocab x D
  std::vector<double> relation_;  // D
  std::vector<double> time_;  // buckets x D
  std::vector<double> loss_history_;
};

/// Margin ranking with fixed, seeded corrupted-tail negatives; deterministic
/// per seed. Throws DataError when the log has fewer than two activities.
TemporalScorer train_temporal_scorer(const EventLog& log, const KnowledgeGraph& kg,
                                     const ScorerParams& params);

/// sigmoid(-distance), in (0, 0.5].
double directly_follows_degree(const TemporalScorer& scorer, const std::string& a, const std::string& b,
                               Instant t);

/// Fraction of (head, tail, bucket) whose true tail ranks within the top k
/// over all vocabulary tails (ties counted against the true tail).
double hits_at_k(const TemporalScorer& scorer, const std::vector<TemporalFact>& facts, int k);

// Repair ------------------------------------------------------------------------

struct RemovedEvent {
  std::string case_id;
  std::size_t index = 0;  // position in the input trace
  std::string activity;
  Triple violated;        // the entailed constraint
  std::string rule_id;    // empty when the constraint is a stored fact
};

enum class Provenance { kRule, kEmbedding };

struct CandidateInsertion {
  std::string case_id;
  std::string activity;
  /// Inserted before input events[position].
  std::size_t position = 0;
  double score = 0;
  Provenance provenance = Provenance::kRule;
  std::string rule_id;
};

struct AugmentationReport {
  std::vector<RemovedEvent> removed_events;
  std::vector<CandidateInsertion> inserted;
  std::optional<double> theta;
  bool strict_ordering = false;
  std::size_t dropped_traces = 0;
};

struct ChaoticFilterOptions {
  /// Also drop an event whose required predecessor never occurred earlier.
  bool strict_ordering = false;
};

/// Removes events that precede their successor against an entailed
/// forbidden_before constraint, repeated to a fixpoint. Traces left empty are
/// dropped.
std::pair<EventLog, AugmentationReport> filter_chaotic_events(const EventLog& log,
                                                              const InferenceClosure& closure,
                                                              const KnowledgeGraph& kg, const AliasMap& alias,
                                                              const ChaoticFilterOptions& options = {});
std::pair<EventLog, AugmentationReport> filter_chaotic_events(const EventLog& log, const RuleBase& rb,
                                                              const KnowledgeGraph& kg, const AliasMap& alias,
                                                              const ChaoticFilterOptions& options = {});

/// For every event whose entailed must_precede obligations name an activity
/// absent earlier in the trace, inserts that activity right before the
/// event when the obligation's confidence or the scorer's directly-follows
/// degree reaches theta. Inserted events carry `synthetic=true`.
std::pair<EventLog, AugmentationReport> infer_missing_events(const EventLog& log,
                                                             const InferenceClosure& closure,
                                                             const KnowledgeGraph& kg,
                                                             const TemporalScorer* scorer, double theta,
                                                             const AliasMap& alias);
std::pair<EventLog, AugmentationReport> infer_missing_events(const EventLog& log, const RuleBase& rb,
                                                             const KnowledgeGraph& kg,
                                                             const TemporalScorer* scorer, double theta,
                                                             const AliasMap& alias);

/// Fraction of cases holding both activities whose first `from` to first
/// `to` gap exceeds `limit`; 0 when no case holds both.
double check_guideline_latency(const EventLog& log, const std::string& from, const std::string& to,
                               Duration limit);

std::string augmentation_report_to_json(const AugmentationReport& report);

inline constexpr const char* kSyntheticAttribute = "synthetic";

}  // namespace kcpm
