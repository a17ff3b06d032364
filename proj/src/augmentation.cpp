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

#include "kcpm/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <memory>
#include <random>
#include <set>

#include "optim.hpp"
#include "training.hpp"

namespace kcpm {

namespace {

constexpr const char* kScorerFormat = "kcpm-temporal-scorer";
constexpr int kScorerVersion = 1;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void ScorerParams::validate() const {
  if (dimension < 1) throw ConfigError("scorer dimension must be positive");
  if (!(margin > 0)) throw ConfigError("scorer margin must be positive");
  if (!(learning_rate > 0)) throw ConfigError("scorer learning rate must be positive");
  if (epochs < 0) throw ConfigError("scorer epochs must be non-negative");
  if (negatives < 1) throw ConfigError("scorer negatives must be at least 1");
  if (time_buckets < 1 || time_buckets > 24 * 60) throw ConfigError("time_buckets must be in [1, 1440]");
}

int time_bucket(Instant t, int buckets) {
  using namespace std::chrono;
  auto day = floor<days>(t);
  auto ms = duration_cast<milliseconds>(t - day).count();
  constexpr long long kDay = 24LL * 3600 * 1000;
  return static_cast<int>(ms * buckets / kDay);
}

std::vector<TemporalFact> temporal_training_facts(const EventLog& log, const KnowledgeGraph& kg, int buckets) {
  std::map<std::tuple<std::string, std::string, int>, double> agg;
  for (const auto& tr : log.traces())
    for (std::size_t i = 0; i + 1 < tr.events.size(); ++i)
      agg[{tr.events[i].activity, tr.events[i + 1].activity, time_bucket(tr.events[i].timestamp, buckets)}] += 1;
  for (const auto& tt : kg.temporal())
    if (tt.triple.predicate == predicates::kDirectlyFollows)
      agg[{tt.triple.subject, tt.triple.object, time_bucket(tt.timestamp, buckets)}] += 1;
  std::vector<TemporalFact> out;
  out.reserve(agg.size());
  for (const auto& [k, w] : agg) out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), w});
  return out;
}

std::size_t TemporalScorer::id(const std::string& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) throw DataError("activity '" + a + "' unknown to the temporal scorer");
  return it->second;
}

double TemporalScorer::distance(const std::string& a, const std::string& b, Instant t) const {
  return distance(a, b, time_bucket(t, params_.time_buckets));
}

double TemporalScorer::distance(const std::string& a, const std::string& b, int bucket) const {
  const std::size_t d = static_cast<std::size_t>(params_.dimension);
  const std::size_t ia = id(a), ib = id(b);
  if (bucket < 0 || bucket >= params_.time_buckets) throw DataError("time bucket out of range");
  const double* ea = &entity_[ia * d];
  const double* eb = &entity_[ib * d];
  const double* tk = &time_[static_cast<std::size_t>(bucket) * d];
  double s = 0;
  for (std::size_t i = 0; i < d; ++i) {
    double v = ea[i] + relation_[i] + tk[i] - eb[i];
    s += v * v;
  }
  return std::sqrt(s);
}

double directly_follows_degree(const TemporalScorer& scorer, const std::string& a, const std::string& b,
                               Instant t) {
  return sigmoid(-scorer.distance(a, b, t));
}

namespace detail {

ScorerProblem scorer_problem(const EventLog& log, const KnowledgeGraph& kg, const ScorerParams& p) {
  p.validate();
  ScorerProblem pr;
  std::map<std::string, std::size_t> index;
  auto facts = temporal_training_facts(log, kg, p.time_buckets);
  std::set<std::string> vocab(log.alphabet().begin(), log.alphabet().end());
  for (const auto& f : facts) {
    vocab.insert(f.head);
    vocab.insert(f.tail);
  }
  if (vocab.size() < 2) throw DataError("the temporal scorer needs at least two activities");
  if (facts.empty()) throw DataError("no directly-follows occurrences to train on");
  pr.vocab.assign(vocab.begin(), vocab.end());
  for (std::size_t i = 0; i < pr.vocab.size(); ++i) index[pr.vocab[i]] = i;

  const std::size_t d = static_cast<std::size_t>(p.dimension);
  const std::size_t ne = pr.vocab.size();
  const std::size_t nb = static_cast<std::size_t>(p.time_buckets);
  const std::size_t off_rel = ne * d, off_time = off_rel + d, total = off_time + nb * d;

  std::mt19937_64 rng(p.seed);
  const double bound = 6.0 / std::sqrt(static_cast<double>(d));
  std::uniform_real_distribution<double> init(-bound, bound);
  pr.off_rel = off_rel;
  pr.off_time = off_time;
  pr.theta.resize(total);
  for (std::size_t i = 0; i < off_time; ++i) pr.theta[i] = init(rng);
  for (std::size_t i = off_time; i < total; ++i) pr.theta[i] = 0.1 * init(rng);

  // Negatives are corrupted tails never observed after the head.
  std::map<std::size_t, std::set<std::size_t>> seen;
  struct Example {
    std::size_t h, t, k;
    double w;
    std::vector<std::size_t> neg;
  };
  auto examples = std::make_shared<std::vector<Example>>();
  auto& ex = *examples;
  for (const auto& f : facts) seen[index[f.head]].insert(index[f.tail]);
  for (const auto& f : facts) {
    Example e{index[f.head], index[f.tail], static_cast<std::size_t>(f.bucket), f.weight, {}};
    std::vector<std::size_t> pool;
    for (std::size_t c = 0; c < ne; ++c)
      if (!seen[e.h].count(c)) pool.push_back(c);
    if (pool.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int n = 0; n < p.negatives; ++n) e.neg.push_back(pool[pick(rng)]);
    ex.push_back(std::move(e));
  }
  double norm = 0;
  for (const auto& e : ex) norm += e.w * static_cast<double>(e.neg.size());

  pr.objective = [examples, norm, d, off_rel, off_time, margin = p.margin](std::span<const double> th,
                                                                          std::span<double> grad) {
    const auto& ex = *examples;
    const bool want = !grad.empty();
    if (want) std::fill(grad.begin(), grad.end(), 0.0);
    if (norm == 0) return 0.0;
    std::vector<double> vp(d), vn(d);
    double loss = 0;
    for (const auto& e : ex) {
      const double* a = &th[e.h * d];
      const double* r = &th[off_rel];
      const double* tk = &th[off_time + e.k * d];
      const double* b = &th[e.t * d];
      double dp = 0;
      for (std::size_t i = 0; i < d; ++i) {
        vp[i] = a[i] + r[i] + tk[i] - b[i];
        dp += vp[i] * vp[i];
      }
      dp = std::sqrt(dp);
      for (std::size_t c : e.neg) {
        const double* bn = &th[c * d];
        double dn = 0;
        for (std::size_t i = 0; i < d; ++i) {
          vn[i] = a[i] + r[i] + tk[i] - bn[i];
          dn += vn[i] * vn[i];
        }
        dn = std::sqrt(dn);
        const double h = margin + dp - dn;
        if (h <= 0) continue;
        loss += e.w * h;
        if (!want) continue;
        const double gp = dp > 1e-12 ? e.w / dp : 0.0, gn = dn > 1e-12 ? e.w / dn : 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          const double g = gp * vp[i] - gn * vn[i];
          grad[e.h * d + i] += g;
          grad[off_rel + i] += g;
          grad[off_time + e.k * d + i] += g;
          grad[e.t * d + i] -= gp * vp[i];
          grad[c * d + i] += gn * vn[i];
        }
      }
    }
    if (want)
      for (auto& g : grad) g /= norm;
    return loss / norm;
  };
  return pr;
}

}  // namespace detail

TemporalScorer train_temporal_scorer(const EventLog& log, const KnowledgeGraph& kg, const ScorerParams& p) {
  auto pr = detail::scorer_problem(log, kg, p);
  TemporalScorer s;
  s.params_ = p;
  s.vocab_ = pr.vocab;
  for (std::size_t i = 0; i < s.vocab_.size(); ++i) s.index_[s.vocab_[i]] = i;
  optim::Settings st;
  st.learning_rate = p.learning_rate;
  st.epochs = p.epochs;
  auto& theta = pr.theta;
  const std::size_t off_rel = pr.off_rel, off_time = pr.off_time;
  s.loss_history_ = optim::minimize(theta, pr.objective, st);

  s.entity_.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(off_rel));
  s.relation_.assign(theta.begin() + static_cast<std::ptrdiff_t>(off_rel),
                     theta.begin() + static_cast<std::ptrdiff_t>(off_time));
  s.time_.assign(theta.begin() + static_cast<std::ptrdiff_t>(off_time), theta.end());
  return s;
}

double hits_at_k(const TemporalScorer& scorer, const std::vector<TemporalFact>& facts, int k) {
  double hit = 0, total = 0;
  for (const auto& f : facts) {
    if (!scorer.knows(f.head) || !scorer.knows(f.tail)) {
      total += f.weight;
      continue;
    }
    const double dt = scorer.distance(f.head, f.tail, f.bucket);
    int rank = 1;
    for (const auto& c : scorer.vocabulary())
      if (c != f.tail && scorer.distance(f.head, c, f.bucket) <= dt) ++rank;
    total += f.weight;
    if (rank <= k) hit += f.weight;
  }
  return total > 0 ? hit / total : 0.0;
}

std::string TemporalScorer::to_json() const {
  nlohmann::json j;
  j["format"] = kScorerFormat;
  j["version"] = kScorerVersion;
  j["params"] = {{"dimension", params_.dimension},       {"margin", params_.margin},
                 {"learning_rate", params_.learning_rate}, {"epochs", params_.epochs},
                 {"negatives", params_.negatives},       {"seed", params_.seed},
                 {"time_buckets", params_.time_buckets}};
  j["vocabulary"] = vocab_;
  j["entity"] = entity_;
  j["relation"] = relation_;
  j["time"] = time_;
  j["loss_history"] = loss_history_;
  return j.dump();
}

TemporalScorer TemporalScorer::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scorer checkpoint: ") + e.what(), 0, 0);
  }
  try {
    if (j.at("format").get<std::string>() != kScorerFormat) throw DataError("not a temporal scorer checkpoint");
    if (j.at("version").get<int>() != kScorerVersion)
      throw DataError("unsupported scorer checkpoint version " + j.at("version").dump());
    TemporalScorer s;
    const auto& p = j.at("params");
    s.params_.dimension = p.at("dimension").get<int>();
    s.params_.margin = p.at("margin").get<double>();
    s.params_.learning_rate = p.at("learning_rate").get<double>();
    s.params_.epochs = p.at("epochs").get<int>();
    s.params_.negatives = p.at("negatives").get<int>();
    s.params_.seed = p.at("seed").get<std::uint64_t>();
    s.params_.time_buckets = p.at("time_buckets").get<int>();
    s.params_.validate();
    s.vocab_ = j.at("vocabulary").get<std::vector<std::string>>();
    s.entity_ = j.at("entity").get<std::vector<double>>();
    s.relation_ = j.at("relation").get<std::vector<double>>();
    s.time_ = j.at("time").get<std::vector<double>>();
    s.loss_history_ = j.value("loss_history", std::vector<double>{});
    const auto d = static_cast<std::size_t>(s.params_.dimension);
    if (s.entity_.size() != s.vocab_.size() * d || s.relation_.size() != d ||
        s.time_.size() != static_cast<std::size_t>(s.params_.time_buckets) * d)
      throw DataError("scorer checkpoint has inconsistent shapes");
    for (std::size_t i = 0; i < s.vocab_.size(); ++i)
      if (!s.index_.emplace(s.vocab_[i], i).second) throw DataError("duplicate vocabulary entry " + s.vocab_[i]);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("scorer checkpoint: ") + e.what());
  }
}

// Repair ------------------------------------------------------------------------

namespace {

std::string entity_of(const std::string& activity, const AliasMap& alias, const KnowledgeGraph& kg) {
  return alias.resolve(activity, kg).value_or(std::string());
}

EventLog rebuild(const EventLog& log, std::vector<Trace> traces) { return EventLog(std::move(traces), log.meta()); }

}  // namespace

std::pair<EventLog, AugmentationReport> filter_chaotic_events(const EventLog& log, const InferenceClosure& closure,
                                                              const KnowledgeGraph& kg, const AliasMap& alias,
                                                              const ChaoticFilterOptions& options) {
  std::map<ActivityPair, Entailment> forbidden;
  for (auto& [t, e] : closure.with_predicate(predicates::kForbiddenBefore)) forbidden[{t.subject, t.object}] = e;
  std::map<std::string, std::vector<std::pair<std::string, Entailment>>> required;
  if (options.strict_ordering)
    for (auto& [t, e] : closure.with_predicate(predicates::kMustPrecede))
      if (t.subject != t.object) required[t.object].emplace_back(t.subject, e);

  AugmentationReport report;
  report.strict_ordering = options.strict_ordering;
  std::vector<Trace> out;
  for (const auto& tr : log.traces()) {
    std::vector<std::string> ent(tr.events.size());
    for (std::size_t i = 0; i < tr.events.size(); ++i) ent[i] = entity_of(tr.events[i].activity, alias, kg);
    std::vector<std::size_t> kept(tr.events.size());
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
    auto drop = [&](std::size_t i, const Triple& fact, const Entailment& e) {
      report.removed_events.push_back({tr.case_id, i, tr.events[i].activity, fact, e.rule_id});
    };

    for (bool changed = true; changed;) {
      changed = false;
      std::vector<std::size_t> next;
      for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
        if (!next.empty() && !ent[*it].empty() && !ent[next.back()].empty()) {
          auto f = forbidden.find({ent[*it], ent[next.back()]});
          if (f != forbidden.end()) {
            drop(*it, {ent[*it], predicates::kForbiddenBefore, ent[next.back()]}, f->second);
            changed = true;
            continue;
          }
        }
        next.push_back(*it);
      }
      std::reverse(next.begin(), next.end());
      kept = std::move(next);

      if (!options.strict_ordering) continue;
      std::set<std::string> seen;
      std::vector<std::size_t> ordered;
      for (std::size_t i : kept) {
        bool ok = true;
        if (auto r = required.find(ent[i]); r != required.end())
          for (const auto& [pre, e] : r->second)
            if (!seen.count(pre)) {
              drop(i, {pre, predicates::kMustPrecede, ent[i]}, e);
              ok = false;
              changed = true;
              break;
            }
        if (!ok) continue;
        if (!ent[i].empty()) seen.insert(ent[i]);
        ordered.push_back(i);
      }
      kept = std::move(ordered);
    }

    if (kept.empty()) {
      ++report.dropped_traces;
      continue;
    }
    Trace t{tr.case_id, {}, tr.attributes};
    for (std::size_t i : kept) t.events.push_back(tr.events[i]);
    out.push_back(std::move(t));
  }
  std::stable_sort(report.removed_events.begin(), report.removed_events.end(),
                   [](const RemovedEvent& a, const RemovedEvent& b) {
                     return std::tie(a.case_id, a.index) < std::tie(b.case_id, b.index);
                   });
  return {rebuild(log, std::move(out)), std::move(report)};
}

std::pair<EventLog, AugmentationReport> filter_chaotic_events(const EventLog& log, const RuleBase& rb,
                                                              const KnowledgeGraph& kg, const AliasMap& alias,
                                                              const ChaoticFilterOptions& options) {
  return filter_chaotic_events(log, InferenceClosure(rb, kg), kg, alias, options);
}

std::pair<EventLog, AugmentationReport> infer_missing_events(const EventLog& log, const InferenceClosure& closure,
                                                             const KnowledgeGraph& kg, const TemporalScorer* scorer,
                                                             double theta, const AliasMap& alias) {
  if (!(theta >= 0 && theta <= 1)) throw ConfigError("theta must lie in [0, 1]");
  std::map<std::string, std::map<std::string, Entailment>> required;  // event -> predecessor -> support
  for (auto& [t, e] : closure.with_predicate(predicates::kMustPrecede))
    if (t.subject != t.object) required[t.object][t.subject] = e;

  AugmentationReport report;
  report.theta = theta;
  std::vector<Trace> out;
  for (const auto& tr : log.traces()) {
    std::vector<Event> events;
    std::vector<bool> synthetic;
    std::set<std::string> seen, rejected;
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
      const Event& ev = tr.events[i];
      const std::string ent = entity_of(ev.activity, alias, kg);
      auto r = ent.empty() ? required.end() : required.find(ent);
      if (r != required.end()) {
        std::vector<std::string> missing;
        for (const auto& [pre, e] : r->second)
          if (!seen.count(pre) && !rejected.count(pre) && pre != ent) missing.push_back(pre);
        // Obligations among the missing activities fix their relative order.
        auto depth = [&](const std::string& x) {
          int n = 0;
          if (auto q = required.find(x); q != required.end())
            for (const auto& y : missing)
              if (q->second.count(y)) ++n;
          return n;
        };
        std::stable_sort(missing.begin(), missing.end(), [&](const std::string& a, const std::string& b) {
          return std::make_pair(depth(a), a) < std::make_pair(depth(b), b);
        });
        for (const auto& pre : missing) {
          const Entailment& why = r->second.at(pre);
          const std::string label = alias.activity_for(pre);
          CandidateInsertion c{tr.case_id, label, i, why.confidence, Provenance::kRule, why.rule_id};
          bool accept = why.confidence >= theta;
          if (!accept && scorer && !events.empty() && scorer->knows(events.back().activity) &&
              scorer->knows(label)) {
            double deg = directly_follows_degree(*scorer, events.back().activity, label, events.back().timestamp);
            if (deg >= theta) {
              accept = true;
              c.score = deg;
              c.provenance = Provenance::kEmbedding;
            }
          }
          if (!accept) {
            rejected.insert(pre);
            continue;
          }
          Event s{tr.case_id, label, {}, std::nullopt, {{kSyntheticAttribute, true}}};
          events.push_back(std::move(s));
          synthetic.push_back(true);
          seen.insert(pre);
          report.inserted.push_back(std::move(c));
        }
      }
      events.push_back(ev);
      synthetic.push_back(false);
      if (!ent.empty()) seen.insert(ent);
    }

    // Synthetic runs split the gap to the neighbouring real events evenly.
    for (std::size_t i = 0; i < events.size();) {
      if (!synthetic[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (synthetic[j]) ++j;  // a real event always closes the run
      const std::size_t k = j - i;
      const Instant next = events[j].timestamp;
      if (i == 0) {
        for (std::size_t m = 0; m < k; ++m) events[m].timestamp = next - std::chrono::seconds(static_cast<long>(k - m));
      } else {
        const Instant prev = events[i - 1].timestamp;
        const auto gap = (next - prev).count();
        for (std::size_t m = 0; m < k; ++m)
          events[i + m].timestamp =
              prev + Duration(gap * static_cast<long long>(m + 1) / static_cast<long long>(k + 1));
      }
      i = j;
    }
    out.push_back(Trace{tr.case_id, std::move(events), tr.attributes});
  }
  return {rebuild(log, std::move(out)), std::move(report)};
}

std::pair<EventLog, AugmentationReport> infer_missing_events(const EventLog& log, const RuleBase& rb,
                                                             const KnowledgeGraph& kg, const TemporalScorer* scorer,
                                                             double theta, const AliasMap& alias) {
  return infer_missing_events(log, InferenceClosure(rb, kg), kg, scorer, theta, alias);
}

double check_guideline_latency(const EventLog& log, const std::string& from, const std::string& to, Duration limit) {
  std::size_t both = 0, late = 0;
  for (const auto& tr : log.traces()) {
    std::optional<Instant> a, b;
    for (const auto& e : tr.events) {
      if (!a && e.activity == from) a = e.timestamp;
      if (!b && e.activity == to) b = e.timestamp;
    }
    if (!a || !b) continue;
    ++both;
    if (*b - *a > limit) ++late;
  }
  return both ? static_cast<double>(late) / static_cast<double>(both) : 0.0;
}

std::string augmentation_report_to_json(const AugmentationReport& r) {
  nlohmann::json j;
  j["removed_events"] = nlohmann::json::array();
  for (const auto& e : r.removed_events)
    j["removed_events"].push_back({{"case_id", e.case_id},
                                   {"index", e.index},
                                   {"activity", e.activity},
                                   {"violated", {{"s", e.violated.subject}, {"p", e.violated.predicate}, {"o", e.violated.object}}},
                                   {"rule", e.rule_id.empty() ? nlohmann::json(nullptr) : nlohmann::json(e.rule_id)}});
  j["inserted"] = nlohmann::json::array();
  for (const auto& c : r.inserted)
    j["inserted"].push_back({{"case_id", c.case_id},
                             {"activity", c.activity},
                             {"position", c.position},
                             {"score", c.score},
                             {"provenance", c.provenance == Provenance::kRule ? "rule" : "embedding"},
                             {"rule", c.rule_id.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.rule_id)}});
  j["theta"] = r.theta ? nlohmann::json(*r.theta) : nlohmann::json(nullptr);
  j["strict_ordering"] = r.strict_ordering;
  j["dropped_traces"] = r.dropped_traces;
  return j.dump(2);
}

}  // namespace kcpm
