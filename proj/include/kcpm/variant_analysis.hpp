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
#include <set>
#include <string>
#include <vector>

#include "kcpm/event_log.hpp"
#include "kcpm/knowledge_graph.hpp"

namespace kcpm {

struct CohortClass {
  std::string id;
  std::string description;

  bool operator==(const CohortClass&) const = default;
};

/// case id -> class id
using CaseLabels = std::map<std::string, std::string>;

/// Header `case_id,class`.
CaseLabels parse_labels_csv(std::istream& in);

struct VariantParams {
  int dimension = 16;
  double margin = 1.0;
  double learning_rate = 0.05;
  int epochs = 150;
  int negatives = 2;
  std::uint64_t seed = 7;
  /// Weight of the cross-entropy term against the ranking term.
  double classification_weight = 1.0;

  void validate() const;
  bool operator==(const VariantParams&) const = default;
};

class VariantModel;
namespace detail {
struct VariantProblem;
VariantProblem variant_problem(const LabeledPropertyGraph&, const CaseLabels&, const VariantParams&,
                               const std::vector<CohortClass>&);
}  // namespace detail

/// TransD graph embeddings plus bilinear attention pooling over the one-hop
/// neighbourhood of each event node.
class VariantModel {
 public:
  const VariantParams& params() const noexcept { return params_; }
  const std::vector<CohortClass>& classes() const noexcept { return classes_; }
  const std::vector<std::string>& entities() const noexcept { return entities_; }
  const std::vector<std::string>& relations() const noexcept { return relations_; }
  const std::vector<double>& loss_history() const noexcept { return loss_history_; }
  const std::vector<double>& class_prior() const noexcept { return prior_; }
  bool knows_entity(const std::string& id) const { return entity_index_.count(id) > 0; }

  // Row-major parameter blocks.
  const std::vector<double>& entity_vectors() const noexcept { return ent_; }
  const std::vector<double>& entity_projections() const noexcept { return ent_proj_; }
  const std::vector<double>& relation_vectors() const noexcept { return rel_; }
  const std::vector<double>& relation_projections() const noexcept { return rel_proj_; }
  const std::vector<double>& class_vectors() const noexcept { return class_vec_; }
  const std::vector<double>& attention() const noexcept { return attention_; }

  /// -||h_perp + r - t_perp||^2 with x_perp = x + r_p (x_p . x).
  /// Throws DataError for unknown ids.
  double edge_score(const std::string& head, const std::string& relation, const std::string& tail) const;

  std::string to_json() const;
  static VariantModel from_json(const std::string& text);

  bool operator==(const VariantModel&) const = default;

 private:
  friend detail::VariantProblem detail::variant_problem(const LabeledPropertyGraph&, const CaseLabels&,
                                                        const VariantParams&, const std::vector<CohortClass>&);
  friend VariantModel train_variant_model(const LabeledPropertyGraph&, const CaseLabels&, const VariantParams&,
                                          const std::vector<CohortClass>&);

  VariantParams params_;
  std::vector<CohortClass> classes_;  // sorted by id
  std::vector<std::string> entities_;
  std::map<std::string, std::size_t> entity_index_;
  std::vector<std::string> relations_;
  std::map<std::string, std::size_t> relation_index_;
  std::vector<double> ent_, ent_proj_;  // entities x D
  std::vector<double> rel_, rel_proj_;  // relations x D
  std::vector<double> class_vec_;       // classes x D
  std::vector<double> attention_;       // D x D, row-major
  std::vector<double> prior_;           // per class
  std::vector<double> loss_history_;
};

/// Errors: fewer than two classes, an empty graph, or a labelled case the
/// graph does not hold. Deterministic per seed.
VariantModel train_variant_model(const LabeledPropertyGraph& lpg, const CaseLabels& labels,
                                 const VariantParams& params, const std::vector<CohortClass>& descriptions = {});

struct TraceScores {
  std::map<std::string, double> scores;  // class id -> probability
  /// No event had a known neighbour; scores are the class prior.
  bool from_prior = false;
};

/// Throws DataError when the graph has no such case.
TraceScores score_trace(const VariantModel& model, const LabeledPropertyGraph& lpg, const std::string& case_id);

struct VariantPartition {
  std::map<std::string, std::string> assignment;
  std::map<std::string, std::map<std::string, double>> scores;
  std::set<std::string> prior_assigned;

  /// class id -> cases.
  std::map<std::string, std::set<std::string>> cells() const;
};

/// Highest score wins; ties go to the smallest class id.
std::string argmax_class(const std::map<std::string, double>& scores);

/// Cases missing from the graph fall back to the class prior and are flagged.
VariantPartition classify_log(const VariantModel& model, const LabeledPropertyGraph& lpg, const EventLog& log);

void write_partition_csv(std::ostream& out, const VariantPartition& p);
std::string partition_to_json(const VariantPartition& p);

/// Fraction of edges whose true tail is among the k best-scoring entities.
double edge_hits_at_k(const VariantModel& model, const std::vector<Triple>& edges, int k);

}  // namespace kcpm
