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

#include "kcpm/knowledge_graph.hpp"

namespace kcpm {

/// Rule variables: 0 = x, 1 = y, k >= 2 = z(k-1).
using Variable = int;
constexpr Variable kVarX = 0;
constexpr Variable kVarY = 1;
std::string variable_name(Variable v);

struct Atom {
  std::string predicate;
  Variable subject = kVarX;
  Variable object = kVarY;

  bool operator==(const Atom&) const = default;
};

/// P1(x,z1) & P2(z1,z2) & ... & Pn(z(n-1),y) => P(x,y)
struct ClosedPathRule {
  std::vector<Atom> body;
  Atom head;
  std::uint64_t support = 0;
  double std_confidence = 0;
  double pca_confidence = 0;

  /// Builds the chain for the given body predicates.
  static ClosedPathRule chain(const std::vector<std::string>& body_predicates,
                              const std::string& head_predicate);

  std::vector<std::string> body_predicates() const;
  /// Throws DataError unless the body is a closed x..y chain and the head is P(x,y).
  void validate() const;
  /// Length-1 body repeating the head predicate.
  bool is_tautology() const;

  /// `worksAt(x,z1) & locatedIn(z1,y) => livesIn(x,y)`; also the rule id.
  std::string id() const;
  /// id() followed by ` [supp=1 conf=0.50 pca=1.00]`.
  std::string to_text() const;
};

struct RuleStatistics {
  std::uint64_t support = 0;
  std::uint64_t body_pairs = 0;
  std::uint64_t pca_body_pairs = 0;
  double std_confidence = 0;
  double pca_confidence = 0;
};

/// Number of distinct (x,y) with a body path x..y in kg and head(x,y) in kg.
std::uint64_t support(const ClosedPathRule& rule, const KnowledgeGraph& kg);
/// support / #body pairs (x,y) whose x has some head fact; 0 on empty denominator.
double pca_confidence(const ClosedPathRule& rule, const KnowledgeGraph& kg);
double std_confidence(const ClosedPathRule& rule, const KnowledgeGraph& kg);
RuleStatistics evaluate(const ClosedPathRule& rule, const KnowledgeGraph& kg);

struct MiningParams {
  int max_body_length = 3;
  std::uint64_t min_support = 1;
  double min_pca_confidence = 0.0;
};

class RuleBase {
 public:
  RuleBase() = default;
  /// Sorts rules (head, body predicates, descending pca) and drops repeated ids.
  RuleBase(std::vector<ClosedPathRule> rules, MiningParams thresholds);

  const std::vector<ClosedPathRule>& rules() const noexcept { return rules_; }
  const MiningParams& thresholds() const noexcept { return thresholds_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }

  /// Union; rules of `this` win on equal ids. Thresholds become the loosest pair.
  RuleBase merged(const RuleBase& other) const;

 private:
  std::vector<ClosedPathRule> rules_;
  MiningParams thresholds_;
};

/// Exhaustive closed-path mining over all predicate sequences up to
/// max_body_length. Output order is deterministic.
RuleBase mine_rules(const KnowledgeGraph& kg, const MiningParams& params);

/// One JSON object per line:
/// {"body":[{"p":..,"s":"x","o":"z1"},..],"head":{..},"support":..,"std_conf":..,"pca_conf":..}
/// The first line carries the thresholds: {"thresholds":{...}}.
void write_rules_jsonl(std::ostream& out, const RuleBase& rb);
RuleBase read_rules_jsonl(std::istream& in);
void write_rules_text(std::ostream& out, const RuleBase& rb);

// Entailment -------------------------------------------------------------------

struct Entailment {
  bool entailed = false;
  double confidence = 0;
  /// Rule that produced the best derivation; empty for stored facts.
  std::string rule_id;
};

/// Forward-chaining closure of a rule base over a graph. A stored fact has
/// confidence 1; a derived fact keeps the best (max) product of rule PCA
/// confidences over its derivations.
class InferenceClosure {
 public:
  InferenceClosure(const RuleBase& rb, const KnowledgeGraph& kg);

  Entailment query(const Triple& fact) const;
  std::size_t fact_count() const noexcept { return facts_.size(); }
  std::size_t derived_count() const noexcept { return derived_; }
  /// Derived facts with a given predicate.
  std::vector<std::pair<Triple, Entailment>> with_predicate(const std::string& predicate) const;
  bool hit_iteration_cap() const noexcept { return capped_; }

 private:
  std::map<Triple, Entailment> facts_;
  std::size_t derived_ = 0;
  bool capped_ = false;
};

Entailment entails(const RuleBase& rb, const KnowledgeGraph& kg, const Triple& fact);

/// Vocabulary that ties rules to control flow.
namespace predicates {
inline constexpr const char* kDirectlyFollows = "directly_follows";
inline constexpr const char* kMustPrecede = "must_precede";
inline constexpr const char* kForbiddenBefore = "forbidden_before";
}  // namespace predicates

}  // namespace kcpm
