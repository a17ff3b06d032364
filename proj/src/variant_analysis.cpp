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

#include "kcpm/variant_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <json.hpp>
#include <memory>
#include <ostream>
#include <random>

#include "csv.hpp"
#include "optim.hpp"
#include "training.hpp"

namespace kcpm {

namespace {

constexpr const char* kModelFormat = "kcpm-variant-model";
constexpr int kModelVersion = 1;

double dot(const double* a, const double* b, std::size_t d) {
  double s = 0;
  for (std::size_t i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

/// Context of an event: the non-event, non-case nodes it points at.
bool is_context(const LpgNode& n) { return !n.labels.count("Event") && !n.labels.count("Case"); }

using CaseView = std::vector<std::vector<std::size_t>>;  // per event, known neighbour entity ids

CaseView view_case(const LabeledPropertyGraph& lpg, const std::vector<std::vector<std::size_t>>& out_edges,
                   const std::vector<std::size_t>& events, const std::map<std::string, std::size_t>& index) {
  CaseView v;
  for (std::size_t ev : events) {
    std::vector<std::size_t> nb;
    for (std::size_t e : out_edges[ev]) {
      const LpgNode& t = lpg.nodes()[lpg.edges()[e].target];
      if (!is_context(t)) continue;
      auto it = index.find(t.id);
      if (it != index.end()) nb.push_back(it->second);
    }
    if (!nb.empty()) v.push_back(std::move(nb));
  }
  return v;
}

std::vector<std::vector<std::size_t>> outgoing(const LabeledPropertyGraph& lpg) {
  std::vector<std::vector<std::size_t>> out(lpg.nodes().size());
  for (const auto& e : lpg.edges()) out[e.source].push_back(e.id);
  return out;
}

const std::string& relation_of(const LpgEdge& e) {
  static const std::string kNone = "RELATED";
  return e.labels.empty() ? kNone : *e.labels.begin();
}

/// Parameter views into one flat vector.
struct Layout {
  std::size_t d, ne, nr, nc;
  std::size_t ent() const { return 0; }
  std::size_t ent_proj() const { return ne * d; }
  std::size_t rel() const { return 2 * ne * d; }
  std::size_t rel_proj() const { return 2 * ne * d + nr * d; }
  std::size_t cls() const { return 2 * ne * d + 2 * nr * d; }
  std::size_t att() const { return cls() + nc * d; }
  std::size_t total() const { return att() + d * d; }
};

/// Forward pass of the classifier head. Returns class logits; when `grad`
/// is non-empty, accumulates d(-log p_label)/d(theta) scaled by `weight`
/// and returns the loss in `ce`.
std::vector<double> case_logits(const Layout& L, std::span<const double> th, const CaseView& cv, int label,
                                double weight, std::span<double> grad, double* ce) {
  const std::size_t d = L.d, n = cv.size();
  std::vector<double> x(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : cv[i])
      for (std::size_t k = 0; k < d; ++k) x[i * d + k] += th[L.ent() + j * d + k];
    for (std::size_t k = 0; k < d; ++k) x[i * d + k] /= static_cast<double>(cv[i].size());
  }
  const double* A = &th[L.att()];
  std::vector<double> logits(L.nc), alpha(L.nc * n), repr(L.nc * d, 0.0), Ac(L.nc * d, 0.0);
  for (std::size_t c = 0; c < L.nc; ++c) {
    const double* cv_c = &th[L.cls() + c * d];
    for (std::size_t r = 0; r < d; ++r) Ac[c * d + r] = dot(A + r * d, cv_c, d);
    double mx = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      alpha[c * n + i] = dot(&x[i * d], &Ac[c * d], d);
      mx = std::max(mx, alpha[c * n + i]);
    }
    double z = 0;
    for (std::size_t i = 0; i < n; ++i) z += alpha[c * n + i] = std::exp(alpha[c * n + i] - mx);
    for (std::size_t i = 0; i < n; ++i) {
      alpha[c * n + i] /= z;
      for (std::size_t k = 0; k < d; ++k) repr[c * d + k] += alpha[c * n + i] * x[i * d + k];
    }
    double s = 0;
    for (std::size_t k = 0; k < d; ++k) s += (repr[c * d + k] - cv_c[k]) * (repr[c * d + k] - cv_c[k]);
    logits[c] = -s;
  }
  if (label < 0) return logits;

  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0;
  for (double l : logits) z += std::exp(l - mx);
  const double lse = mx + std::log(z);
  *ce = lse - logits[static_cast<std::size_t>(label)];
  if (grad.empty()) return logits;

  std::vector<double> gx(n * d, 0.0);
  for (std::size_t c = 0; c < L.nc; ++c) {
    const double g = weight * (std::exp(logits[c] - lse) - (static_cast<int>(c) == label ? 1.0 : 0.0));
    const double* cv_c = &th[L.cls() + c * d];
    std::vector<double> gr(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = repr[c * d + k] - cv_c[k];
      gr[k] = -2.0 * diff * g;
      grad[L.cls() + c * d + k] += 2.0 * diff * g;
    }
    std::vector<double> galpha(n);
    double mean = 0;
    for (std::size_t i = 0; i < n; ++i) {
      galpha[i] = dot(&gr[0], &x[i * d], d);
      mean += alpha[c * n + i] * galpha[i];
      for (std::size_t k = 0; k < d; ++k) gx[i * d + k] += alpha[c * n + i] * gr[k];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double gs = alpha[c * n + i] * (galpha[i] - mean);
      if (gs == 0) continue;
      for (std::size_t k = 0; k < d; ++k) gx[i * d + k] += gs * Ac[c * d + k];
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t k = 0; k < d; ++k) grad[L.att() + r * d + k] += gs * x[i * d + r] * cv_c[k];
      for (std::size_t k = 0; k < d; ++k) {
        double s = 0;
        for (std::size_t r = 0; r < d; ++r) s += A[r * d + k] * x[i * d + r];
        grad[L.cls() + c * d + k] += gs * s;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double inv = 1.0 / static_cast<double>(cv[i].size());
    for (std::size_t j : cv[i])
      for (std::size_t k = 0; k < d; ++k) grad[L.ent() + j * d + k] += gx[i * d + k] * inv;
  }
  return logits;
}

/// ||h_perp + r - t_perp||^2; accumulates `scale` times its gradient.
double transd(const Layout& L, std::span<const double> th, std::size_t h, std::size_t r, std::size_t t,
              std::span<double> grad, double scale) {
  const std::size_t d = L.d;
  const double* hv = &th[L.ent() + h * d];
  const double* hp = &th[L.ent_proj() + h * d];
  const double* tv = &th[L.ent() + t * d];
  const double* tp = &th[L.ent_proj() + t * d];
  const double* rv = &th[L.rel() + r * d];
  const double* rp = &th[L.rel_proj() + r * d];
  const double ph = dot(hp, hv, d), pt = dot(tp, tv, d);
  double s = 0;
  std::vector<double> v(d);
  for (std::size_t k = 0; k < d; ++k) {
    v[k] = hv[k] + rp[k] * ph + rv[k] - tv[k] - rp[k] * pt;
    s += v[k] * v[k];
  }
  if (grad.empty() || scale == 0) return s;
  double rg = 0;
  for (std::size_t k = 0; k < d; ++k) rg += rp[k] * 2.0 * v[k];
  for (std::size_t k = 0; k < d; ++k) {
    const double g = 2.0 * v[k] * scale;
    grad[L.ent() + h * d + k] += g + hp[k] * rg * scale;
    grad[L.ent_proj() + h * d + k] += hv[k] * rg * scale;
    grad[L.ent() + t * d + k] -= g + tp[k] * rg * scale;
    grad[L.ent_proj() + t * d + k] -= tv[k] * rg * scale;
    grad[L.rel() + r * d + k] += g;
    grad[L.rel_proj() + r * d + k] += (ph - pt) * g;
  }
  return s;
}

Layout layout_of(const VariantModel& m) {
  return {static_cast<std::size_t>(m.params().dimension), m.entities().size(), m.relations().size(),
          m.classes().size()};
}

/// All parameter blocks in the training layout.
std::vector<double> pack(const VariantModel& m) {
  const Layout L = layout_of(m);
  std::vector<double> th(L.total(), 0.0);
  auto put = [&](const std::vector<double>& v, std::size_t at) {
    std::copy(v.begin(), v.end(), th.begin() + static_cast<std::ptrdiff_t>(at));
  };
  put(m.entity_vectors(), L.ent());
  put(m.entity_projections(), L.ent_proj());
  put(m.relation_vectors(), L.rel());
  put(m.relation_projections(), L.rel_proj());
  put(m.class_vectors(), L.cls());
  put(m.attention(), L.att());
  return th;
}

}  // namespace

void VariantParams::validate() const {
  if (dimension < 1) throw ConfigError("variant dimension must be positive");
  if (!(margin > 0)) throw ConfigError("variant margin must be positive");
  if (!(learning_rate > 0)) throw ConfigError("variant learning rate must be positive");
  if (epochs < 0) throw ConfigError("variant epochs must be non-negative");
  if (negatives < 1) throw ConfigError("variant negatives must be at least 1");
  if (!(classification_weight >= 0)) throw ConfigError("classification weight must be non-negative");
}

CaseLabels parse_labels_csv(std::istream& in) {
  csv::Reader reader(in);
  std::vector<csv::Field> rec;
  if (!reader.next(rec)) throw ParseError("labels file is empty", 1);
  std::size_t ci = rec.size(), ki = rec.size();
  for (std::size_t i = 0; i < rec.size(); ++i) {
    std::string h = trim(rec[i].text);
    if (h == "case_id") ci = i;
    if (h == "class") ki = i;
  }
  if (ci == rec.size() || ki == rec.size()) throw ConfigError("labels file needs case_id and class columns");
  CaseLabels out;
  while (reader.next(rec)) {
    if (rec.size() <= std::max(ci, ki)) throw ParseError("short labels row", reader.line());
    const std::string c = rec[ci].text, k = trim(rec[ki].text);
    if (k.empty()) throw ParseError("empty class for case '" + c + "'", reader.line());
    auto [it, fresh] = out.emplace(c, k);
    if (!fresh && it->second != k) throw DataError("case '" + c + "' carries two labels");
  }
  return out;
}

double VariantModel::edge_score(const std::string& head, const std::string& relation, const std::string& tail) const {
  auto h = entity_index_.find(head), t = entity_index_.find(tail);
  auto r = relation_index_.find(relation);
  if (h == entity_index_.end()) throw DataError("unknown entity '" + head + "'");
  if (t == entity_index_.end()) throw DataError("unknown entity '" + tail + "'");
  if (r == relation_index_.end()) throw DataError("unknown relation '" + relation + "'");
  const Layout L = layout_of(*this);
  const std::vector<double> th = pack(*this);
  return -transd(L, th, h->second, r->second, t->second, {}, 0);
}

namespace detail {

VariantProblem variant_problem(const LabeledPropertyGraph& lpg, const CaseLabels& labels, const VariantParams& p,
                               const std::vector<CohortClass>& descriptions) {
  p.validate();
  if (lpg.nodes().empty()) throw DataError("cannot train on an empty graph");
  std::set<std::string> class_ids;
  for (const auto& [c, k] : labels) class_ids.insert(k);
  if (class_ids.size() < 2) throw DataError("variant training needs at least two classes");
  for (const auto& [c, k] : labels)
    if (lpg.case_events(c).empty()) throw DataError("labelled case '" + c + "' is not in the graph");

  VariantModel m;
  m.params_ = p;
  for (const auto& id : class_ids) {
    CohortClass cc{id, {}};
    for (const auto& dsc : descriptions)
      if (dsc.id == id) cc.description = dsc.description;
    m.classes_.push_back(cc);
  }
  for (const auto& n : lpg.nodes()) {
    m.entity_index_.emplace(n.id, m.entities_.size());
    m.entities_.push_back(n.id);
  }
  std::set<std::string> rels;
  for (const auto& e : lpg.edges()) rels.insert(relation_of(e));
  m.relations_.assign(rels.begin(), rels.end());
  for (std::size_t i = 0; i < m.relations_.size(); ++i) m.relation_index_[m.relations_[i]] = i;

  const Layout L = layout_of(m);
  const std::size_t d = L.d;
  VariantProblem pr;
  pr.blocks = {L.ent(), L.ent_proj(), L.rel(), L.rel_proj(), L.cls(), L.att(), L.total()};
  std::mt19937_64 rng(p.seed);
  const double bound = 6.0 / std::sqrt(static_cast<double>(d));
  std::uniform_real_distribution<double> init(-bound, bound), small(-0.1, 0.1);
  pr.theta.resize(L.total());
  for (std::size_t i = 0; i < L.total(); ++i) {
    const bool proj = (i >= L.ent_proj() && i < L.rel()) || (i >= L.rel_proj() && i < L.cls()) || i >= L.att();
    pr.theta[i] = proj ? small(rng) : init(rng);
  }

  struct Sample {
    std::size_t h, r, t;
    std::vector<std::size_t> neg;
  };
  auto sample_store = std::make_shared<std::vector<Sample>>();
  auto& samples = *sample_store;
  std::uniform_int_distribution<std::size_t> pick(0, L.ne - 1);
  for (const auto& e : lpg.edges()) {
    Sample s{e.source, m.relation_index_.at(relation_of(e)), e.target, {}};
    if (L.ne > 1)
      for (int k = 0; k < p.negatives; ++k) {
        std::size_t c;
        do c = pick(rng);
        while (c == s.t);
        s.neg.push_back(c);
      }
    samples.push_back(std::move(s));
  }

  const auto out_edges = outgoing(lpg);
  auto train_store = std::make_shared<std::vector<std::pair<CaseView, int>>>();
  auto& train = *train_store;
  std::map<std::string, std::size_t> class_pos;
  for (std::size_t i = 0; i < m.classes_.size(); ++i) class_pos[m.classes_[i].id] = i;
  m.prior_.assign(L.nc, 0.0);
  for (const auto& [c, k] : labels) {
    m.prior_[class_pos[k]] += 1.0 / static_cast<double>(labels.size());
    CaseView v = view_case(lpg, out_edges, lpg.case_events(c), m.entity_index_);
    if (!v.empty()) train.emplace_back(std::move(v), static_cast<int>(class_pos[k]));
  }

  double rank_norm = 0;
  for (const auto& s : samples) rank_norm += static_cast<double>(s.neg.size());
  const double ce_w = train.empty() ? 0.0 : p.classification_weight / static_cast<double>(train.size());

  pr.objective = [L, sample_store, train_store, rank_norm, ce_w, margin = p.margin](std::span<const double> th,
                                                                                    std::span<double> grad) {
    const auto& samples = *sample_store;
    const auto& train = *train_store;
    const bool want = !grad.empty();
    if (want) std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0;
    if (rank_norm > 0) {
      for (const auto& s : samples) {
        const double dp = transd(L, th, s.h, s.r, s.t, {}, 0);
        for (std::size_t c : s.neg) {
          const double dn = transd(L, th, s.h, s.r, c, {}, 0);
          const double hinge = margin + dp - dn;
          if (hinge <= 0) continue;
          loss += hinge / rank_norm;
          if (want) {
            transd(L, th, s.h, s.r, s.t, grad, 1.0 / rank_norm);
            transd(L, th, s.h, s.r, c, grad, -1.0 / rank_norm);
          }
        }
      }
    }
    for (const auto& [cv, label] : train) {
      double ce = 0;
      case_logits(L, th, cv, label, ce_w, grad, &ce);
      loss += ce_w * ce;
    }
    return loss;
  };
  pr.model = std::move(m);
  return pr;
}

}  // namespace detail

VariantModel train_variant_model(const LabeledPropertyGraph& lpg, const CaseLabels& labels, const VariantParams& p,
                                 const std::vector<CohortClass>& descriptions) {
  auto pr = detail::variant_problem(lpg, labels, p, descriptions);
  optim::Settings st;
  st.learning_rate = p.learning_rate;
  st.epochs = p.epochs;
  VariantModel m = std::move(pr.model);
  m.loss_history_ = optim::minimize(pr.theta, pr.objective, st);

  const auto& b = pr.blocks;
  auto slice = [&](std::size_t i) {
    return std::vector<double>(pr.theta.begin() + static_cast<std::ptrdiff_t>(b[i]),
                               pr.theta.begin() + static_cast<std::ptrdiff_t>(b[i + 1]));
  };
  m.ent_ = slice(0);
  m.ent_proj_ = slice(1);
  m.rel_ = slice(2);
  m.rel_proj_ = slice(3);
  m.class_vec_ = slice(4);
  m.attention_ = slice(5);
  return m;
}

namespace {

std::vector<double> softmax(const std::vector<double>& logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0;
  for (std::size_t i = 0; i < p.size(); ++i) z += p[i] = std::exp(logits[i] - mx);
  for (auto& v : p) v /= z;
  return p;
}

struct ScoringContext {
  Layout layout;
  std::vector<double> theta;
  std::vector<std::vector<std::size_t>> out_edges;
  std::map<std::string, std::size_t> index;
};

ScoringContext scoring_context(const VariantModel& m, const LabeledPropertyGraph& lpg) {
  ScoringContext ctx{layout_of(m), pack(m), outgoing(lpg), {}};
  for (std::size_t i = 0; i < m.entities().size(); ++i) ctx.index[m.entities()[i]] = i;
  return ctx;
}

TraceScores score_with(const VariantModel& m, const ScoringContext& ctx, const LabeledPropertyGraph& lpg,
                       const std::vector<std::size_t>& events) {
  TraceScores out;
  CaseView v = view_case(lpg, ctx.out_edges, events, ctx.index);
  std::vector<double> probs;
  if (v.empty()) {
    probs = m.class_prior();
    out.from_prior = true;
  } else {
    probs = softmax(case_logits(ctx.layout, ctx.theta, v, -1, 0, {}, nullptr));
  }
  for (std::size_t c = 0; c < m.classes().size(); ++c) out.scores[m.classes()[c].id] = probs[c];
  return out;
}

}  // namespace

TraceScores score_trace(const VariantModel& model, const LabeledPropertyGraph& lpg, const std::string& case_id) {
  const auto& events = lpg.case_events(case_id);
  if (events.empty()) throw DataError("case '" + case_id + "' is not in the graph");
  return score_with(model, scoring_context(model, lpg), lpg, events);
}

std::string argmax_class(const std::map<std::string, double>& scores) {
  if (scores.empty()) throw DataError("no class scores");
  auto best = scores.begin();
  for (auto it = scores.begin(); it != scores.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

std::map<std::string, std::set<std::string>> VariantPartition::cells() const {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [c, k] : assignment) out[k].insert(c);
  return out;
}

VariantPartition classify_log(const VariantModel& model, const LabeledPropertyGraph& lpg, const EventLog& log) {
  const ScoringContext ctx = scoring_context(model, lpg);
  const auto& traces = log.traces();
  std::vector<TraceScores> res(traces.size());
  parallel_for(traces.size(), [&](std::size_t i) {
    res[i] = score_with(model, ctx, lpg, lpg.case_events(traces[i].case_id));
  });
  VariantPartition p;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& id = traces[i].case_id;
    p.assignment[id] = argmax_class(res[i].scores);
    p.scores[id] = std::move(res[i].scores);
    if (res[i].from_prior) p.prior_assigned.insert(id);
  }
  return p;
}

void write_partition_csv(std::ostream& out, const VariantPartition& p) {
  std::set<std::string> classes;
  for (const auto& [c, s] : p.scores)
    for (const auto& [k, v] : s) classes.insert(k);
  std::vector<std::string> row{"case_id", "class", "prior_assigned"};
  for (const auto& k : classes) row.push_back(csv::escape("score:" + k));
  csv::write_row(out, row);
  for (const auto& [c, k] : p.assignment) {
    row = {csv::escape(c), csv::escape(k), p.prior_assigned.count(c) ? "true" : "false"};
    const auto& s = p.scores.at(c);
    for (const auto& cls : classes) {
      auto it = s.find(cls);
      row.push_back(it == s.end() ? "" : to_string(AttributeValue(it->second)));
    }
    csv::write_row(out, row);
  }
}

std::string partition_to_json(const VariantPartition& p) {
  nlohmann::json j;
  j["cases"] = nlohmann::json::array();
  for (const auto& [c, k] : p.assignment)
    j["cases"].push_back(
        {{"case_id", c}, {"class", k}, {"scores", p.scores.at(c)}, {"prior_assigned", p.prior_assigned.count(c) > 0}});
  nlohmann::json cells = nlohmann::json::object();
  for (const auto& [k, cs] : p.cells()) cells[k] = cs;
  j["cells"] = cells;
  return j.dump(2);
}

double edge_hits_at_k(const VariantModel& model, const std::vector<Triple>& edges, int k) {
  if (edges.empty()) return 0.0;
  const Layout L = layout_of(model);
  const std::vector<double> th = pack(model);
  std::map<std::string, std::size_t> ent, rel;
  for (std::size_t i = 0; i < model.entities().size(); ++i) ent[model.entities()[i]] = i;
  for (std::size_t i = 0; i < model.relations().size(); ++i) rel[model.relations()[i]] = i;
  std::vector<int> hit(edges.size(), 0);
  parallel_for(edges.size(), [&](std::size_t i) {
    auto h = ent.find(edges[i].subject), t = ent.find(edges[i].object);
    auto r = rel.find(edges[i].predicate);
    if (h == ent.end() || t == ent.end() || r == rel.end()) return;
    const double dt = transd(L, th, h->second, r->second, t->second, {}, 0);
    int rank = 1;
    for (std::size_t c = 0; c < L.ne && rank <= k; ++c)
      if (c != t->second && transd(L, th, h->second, r->second, c, {}, 0) <= dt) ++rank;
    hit[i] = rank <= k;
  });
  std::size_t n = 0;
  for (int v : hit) n += static_cast<std::size_t>(v);
  return static_cast<double>(n) / static_cast<double>(edges.size());
}

std::string VariantModel::to_json() const {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["params"] = {{"dimension", params_.dimension},
                 {"margin", params_.margin},
                 {"learning_rate", params_.learning_rate},
                 {"epochs", params_.epochs},
                 {"negatives", params_.negatives},
                 {"seed", params_.seed},
                 {"classification_weight", params_.classification_weight}};
  j["classes"] = nlohmann::json::array();
  for (const auto& c : classes_) j["classes"].push_back({{"id", c.id}, {"description", c.description}});
  j["entities"] = entities_;
  j["relations"] = relations_;
  j["entity"] = ent_;
  j["entity_projection"] = ent_proj_;
  j["relation"] = rel_;
  j["relation_projection"] = rel_proj_;
  j["class_vectors"] = class_vec_;
  j["attention"] = attention_;
  j["class_prior"] = prior_;
  j["loss_history"] = loss_history_;
  return j.dump();
}

VariantModel VariantModel::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("variant checkpoint: ") + e.what(), 0, 0);
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormat) throw DataError("not a variant model checkpoint");
    if (j.at("version").get<int>() != kModelVersion)
      throw DataError("unsupported variant checkpoint version " + j.at("version").dump());
    VariantModel m;
    const auto& p = j.at("params");
    m.params_.dimension = p.at("dimension").get<int>();
    m.params_.margin = p.at("margin").get<double>();
    m.params_.learning_rate = p.at("learning_rate").get<double>();
    m.params_.epochs = p.at("epochs").get<int>();
    m.params_.negatives = p.at("negatives").get<int>();
    m.params_.seed = p.at("seed").get<std::uint64_t>();
    m.params_.classification_weight = p.at("classification_weight").get<double>();
    m.params_.validate();
    for (const auto& c : j.at("classes"))
      m.classes_.push_back({c.at("id").get<std::string>(), c.value("description", std::string())});
    m.entities_ = j.at("entities").get<std::vector<std::string>>();
    m.relations_ = j.at("relations").get<std::vector<std::string>>();
    m.ent_ = j.at("entity").get<std::vector<double>>();
    m.ent_proj_ = j.at("entity_projection").get<std::vector<double>>();
    m.rel_ = j.at("relation").get<std::vector<double>>();
    m.rel_proj_ = j.at("relation_projection").get<std::vector<double>>();
    m.class_vec_ = j.at("class_vectors").get<std::vector<double>>();
    m.attention_ = j.at("attention").get<std::vector<double>>();
    m.prior_ = j.at("class_prior").get<std::vector<double>>();
    m.loss_history_ = j.value("loss_history", std::vector<double>{});
    const auto d = static_cast<std::size_t>(m.params_.dimension);
    const auto ne = m.entities_.size(), nr = m.relations_.size(), nc = m.classes_.size();
    if (nc < 2 || m.ent_.size() != ne * d || m.ent_proj_.size() != ne * d || m.rel_.size() != nr * d ||
        m.rel_proj_.size() != nr * d || m.class_vec_.size() != nc * d || m.attention_.size() != d * d ||
        m.prior_.size() != nc)
      throw DataError("variant checkpoint has inconsistent shapes");
    for (std::size_t i = 1; i < nc; ++i)
      if (!(m.classes_[i - 1].id < m.classes_[i].id)) throw DataError("variant checkpoint classes must be sorted and unique");
    for (std::size_t i = 0; i < ne; ++i)
      if (!m.entity_index_.emplace(m.entities_[i], i).second) throw DataError("duplicate entity " + m.entities_[i]);
    for (std::size_t i = 0; i < nr; ++i)
      if (!m.relation_index_.emplace(m.relations_[i], i).second) throw DataError("duplicate relation " + m.relations_[i]);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("variant checkpoint: ") + e.what());
  }
}

}  // namespace kcpm
