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
#include <unordered_map>
#include <vector>

#include "kcpm/common.hpp"
#include "kcpm/event_log.hpp"

namespace kcpm {

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

struct TemporalTriple {
  Triple triple;
  Instant timestamp{};

  auto operator<=>(const TemporalTriple&) const = default;
  bool operator==(const TemporalTriple&) const = default;
};

/// Pattern for query(): an empty optional is a wildcard.
struct TriplePattern {
  std::optional<std::string> subject;
  std::optional<std::string> predicate;
  std::optional<std::string> object;
};

/// Immutable fact store. Temporal facts are kept with their instant and are
/// also visible, without it, among the plain triples.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  KnowledgeGraph(std::vector<Triple> triples, std::vector<TemporalTriple> temporal = {});

  /// Sorted, duplicate-free.
  const std::vector<Triple>& triples() const noexcept { return triples_; }
  const std::vector<TemporalTriple>& temporal() const noexcept { return temporal_; }

  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  bool contains(const Triple& t) const;
  bool has_entity(const std::string& id) const;

  /// Subjects and objects, sorted.
  std::vector<std::string> entities() const;
  std::vector<std::string> predicates() const;

  std::vector<Triple> query(const TriplePattern& pattern) const;

  /// Positions into triples(), ascending.
  const std::vector<std::uint32_t>& by_subject(const std::string& s) const;
  const std::vector<std::uint32_t>& by_predicate(const std::string& p) const;
  const std::vector<std::uint32_t>& by_object(const std::string& o) const;

  /// Copy with extra facts.
  KnowledgeGraph with(const std::vector<Triple>& extra) const;

 private:
  using Index = std::unordered_map<std::string, std::vector<std::uint32_t>>;
  static const std::vector<std::uint32_t>& lookup(const Index& idx, const std::string& key);

  std::vector<Triple> triples_;
  std::vector<TemporalTriple> temporal_;
  Index by_subject_, by_predicate_, by_object_;
};

enum class TripleFormat { kTsv, kNTriples };

/// TSV: `subject<TAB>predicate<TAB>object[<TAB>iso8601]`; blank lines and
/// lines starting with '#' are ignored. N-Triples subset: IRIs and plain
/// literals, no blank nodes. Throws ParseError with the line number.
KnowledgeGraph load_triples(std::istream& in, TripleFormat format);
void write_triples_tsv(std::ostream& out, const KnowledgeGraph& kg);

/// Activity label -> knowledge-graph entity id. Lookup falls back to the
/// label itself when the graph knows it as an entity.
class AliasMap {
 public:
  AliasMap() = default;
  explicit AliasMap(std::map<std::string, std::string> explicit_aliases);

  std::optional<std::string> resolve(const std::string& activity, const KnowledgeGraph& kg) const;
  /// Entity id -> activity label (first explicit alias wins, else identity).
  std::string activity_for(const std::string& entity) const;
  const std::map<std::string, std::string>& entries() const noexcept { return aliases_; }

 private:
  std::map<std::string, std::string> aliases_;
  std::map<std::string, std::string> reverse_;
};

/// Two-column CSV `activity,entity` with a header row.
AliasMap parse_alias_csv(std::istream& in);

// Labeled property graph -------------------------------------------------------

struct LpgNode {
  std::string id;
  std::set<std::string> labels;
  Attributes props;
};

struct LpgEdge {
  std::size_t id = 0;
  std::size_t source = 0;  // node index
  std::size_t target = 0;
  std::set<std::string> labels;
  Attributes props;
};

class LabeledPropertyGraph {
 public:
  /// Returns the index of the node, creating it with `label` if new; an
  /// existing node gains `label`.
  std::size_t add_node(const std::string& id, const std::string& label);
  std::size_t add_edge(std::size_t source, std::size_t target, const std::string& label);

  const std::vector<LpgNode>& nodes() const noexcept { return nodes_; }
  const std::vector<LpgEdge>& edges() const noexcept { return edges_; }
  LpgNode& node(std::size_t i) { return nodes_[i]; }
  std::optional<std::size_t> find(const std::string& id) const;

  /// Event node indices of a case, in trace order. Empty if unknown.
  const std::vector<std::size_t>& case_events(const std::string& case_id) const;
  std::vector<std::string> case_ids() const;

  std::size_t count_label(const std::string& label) const;
  void append_case_event(const std::string& case_id, std::size_t node);

 private:
  std::vector<LpgNode> nodes_;
  std::vector<LpgEdge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, std::vector<std::size_t>> case_events_;
};

struct LpgOptions {
  AliasMap aliases;
  /// Event attributes whose values become `AttributeValue` nodes linked to
  /// the event by a `HAS_<key>` edge. Empty keeps values as properties only.
  std::vector<std::string> attribute_nodes;
};

namespace lpg_id {
std::string event(const std::string& case_id, std::size_t index);
std::string case_node(const std::string& case_id);
std::string activity(const std::string& name);
std::string resource(const std::string& name);
std::string entity(const std::string& id);
std::string attribute_value(const std::string& key, const std::string& value);
}  // namespace lpg_id

/// Fuses event data and domain facts. Event, Case, Activity, Resource and
/// Entity nodes; DF, BELONGS_TO, INSTANCE_OF, PERFORMED_BY edges; one edge per
/// triple labeled by its predicate. An activity that resolves to a graph
/// entity shares one node labeled {Activity, Entity}.
LabeledPropertyGraph build_lpg(const EventLog& log, const KnowledgeGraph& kg,
                               const LpgOptions& options = {});

void write_graphml(std::ostream& out, const LabeledPropertyGraph& g);
void write_lpg_nodes_csv(std::ostream& out, const LabeledPropertyGraph& g);
void write_lpg_edges_csv(std::ostream& out, const LabeledPropertyGraph& g);
void write_lpg_dot(std::ostream& out, const LabeledPropertyGraph& g);

}  // namespace kcpm
