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

#include "kcpm/rule_mining.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <set>
#include <unordered_map>

namespace kcpm {

std::string variable_name(Variable v) {
  if (v == kVarX) return "x";
  if (v == kVarY) return "y";
  return "z" + std::to_string(v - 1);
}

namespace {

Variable parse_variable(const std::string& s) {
  if (s == "x") return kVarX;
  if (s == "y") return kVarY;
  if (s.size() >= 2 && s[0] == 'z') {
    int k = std::stoi(s.substr(1));
    if (k >= 1) return k + 1;
  }
  throw DataError("unknown rule variable '" + s + "'");
}

}  // namespace

ClosedPathRule ClosedPathRule::chain(const std::vector<std::string>& body_predicates,
                                     const std::string& head_predicate) {
  ClosedPathRule r;
  const int n = static_cast<int>(body_predicates.size());
  for (int i = 0; i < n; ++i) {
    Variable s = i == 0 ? kVarX : i + 1;
    Variable o = i == n - 1 ? kVarY : i + 2;
    r.body.push_back(Atom{body_predicates[static_cast<std::size_t>(i)], s, o});
  }
  r.head = Atom{head_predicate, kVarX, kVarY};
  return r;
}

std::vector<std::string> ClosedPathRule::body_predicates() const {
  std::vector<std::string> out;
  for (const auto& a : body) out.push_back(a.predicate);
  return out;
}

void ClosedPathRule::validate() const {
  if (body.empty()) throw DataError("rule with an empty body");
  if (head.predicate.empty() || head.subject != kVarX || head.object != kVarY)
    throw DataError("rule head must be P(x,y)");
  if (body.front().subject != kVarX) throw DataError("rule body must start at x");
  if (body.back().object != kVarY) throw DataError("rule body must end at y");
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i].predicate.empty()) throw DataError("rule atom with an empty predicate");
    if (i + 1 < body.size() && body[i].object != body[i + 1].subject)
      throw DataError("rule body is not a connected chain");
    if (i + 1 < body.size() && (body[i].object == kVarX || body[i].object == kVarY))
      throw DataError("rule body revisits x or y");
  }
  if (std_confidence < 0 || std_confidence > 1 || pca_confidence < 0 || pca_confidence > 1)
    throw DataError("rule confidence outside [0,1]");
}

bool ClosedPathRule::is_tautology() const {
  return body.size() == 1 && body[0].predicate == head.predicate;
}

std::string ClosedPathRule::id() const {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += " & ";
    out += body[i].predicate + "(" + variable_name(body[i].subject) + "," + variable_name(body[i].object) + ")";
  }
  out += " => " + head.predicate + "(x,y)";
  return out;
}

std::string ClosedPathRule::to_text() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, " [supp=%llu conf=%.2f pca=%.2f]",
                static_cast<unsigned long long>(support), std_confidence, pca_confidence);
  return id() + buf;
}

// Evaluation ------------------------------------------------------------------

namespace {

/// Integer-coded view of the plain triples: per predicate, subject -> sorted objects.
class Adjacency {
 public:
  explicit Adjacency(const KnowledgeGraph& kg) {
    for (const auto& t : kg.triples()) {
      code(t.subject);
      code(t.object);
    }
    for (const auto& t : kg.triples()) {
      auto& rows = by_pred_[t.predicate];
      if (rows.empty()) rows.resize(names_.size());
      rows[static_cast<std::size_t>(ids_.at(t.subject))].push_back(ids_.at(t.object));
    }
    for (auto& [p, rows] : by_pred_)
      for (auto& r : rows) std::sort(r.begin(), r.end());
  }

  std::size_t entity_count() const { return names_.size(); }

  /// nullptr when the predicate is unknown.
  const std::vector<std::vector<int>>* rows(const std::string& p) const {
    auto it = by_pred_.find(p);
    return it == by_pred_.end() ? nullptr : &it->second;
  }

  std::vector<std::string> predicates() const {
    std::vector<std::string> out;
    for (const auto& [p, r] : by_pred_) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void code(const std::string& e) {
    if (ids_.emplace(e, static_cast<int>(names_.size())).second) names_.push_back(e);
  }
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::vector<std::vector<int>>> by_pred_;
};

/// For each x, the sorted set of y reachable along a predicate path.
using PairSet = std::vector<std::vector<int>>;

PairSet extend(const PairSet& prefix, const std::vector<std::vector<int>>& rows) {
  PairSet out(prefix.size());
  std::vector<char> mark(prefix.size(), 0);
  for (std::size_t x = 0; x < prefix.size(); ++x) {
    if (prefix[x].empty()) continue;
    std::vector<int>& dst = out[x];
    for (int z : prefix[x])
      for (int y : rows[static_cast<std::size_t>(z)])
        if (!mark[static_cast<std::size_t>(y)]) {
          mark[static_cast<std::size_t>(y)] = 1;
          dst.push_back(y);
        }
    for (int y : dst) mark[static_cast<std::size_t>(y)] = 0;
    std::sort(dst.begin(), dst.end());
  }
  return out;
}

bool empty_pairs(const PairSet& ps) {
  return std::all_of(ps.begin(), ps.end(), [](const auto& v) { return v.empty(); });
}

RuleStatistics statistics(const PairSet& body, const std::vector<std::vector<int>>* head) {
  RuleStatistics s;
  for (std::size_t x = 0; x < body.size(); ++x) {
    const auto& ys = body[x];
    s.body_pairs += ys.size();
    if (!head || (*head)[x].empty()) continue;
    s.pca_body_pairs += ys.size();
    const auto& hs = (*head)[x];
    std::size_t i = 0, j = 0;
    while (i < ys.size() && j < hs.size()) {
      if (ys[i] < hs[j]) ++i;
      else if (hs[j] < ys[i]) ++j;
      else {
        ++s.support;
        ++i;
        ++j;
      }
    }
  }
  s.std_confidence = s.body_pairs ? static_cast<double>(s.support) / static_cast<double>(s.body_pairs) : 0.0;
  s.pca_confidence =
      s.pca_body_pairs ? static_cast<double>(s.support) / static_cast<double>(s.pca_body_pairs) : 0.0;
  return s;
}

std::optional<PairSet> body_pairs(const Adjacency& adj, const std::vector<std::string>& preds) {
  PairSet ps;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto* rows = adj.rows(preds[i]);
    if (!rows) return std::nullopt;
    ps = i == 0 ? *rows : extend(ps, *rows);
  }
  return ps;
}

}  // namespace

RuleStatistics evaluate(const ClosedPathRule& rule, const KnowledgeGraph& kg) {
  rule.validate();
  Adjacency adj(kg);
  auto ps = body_pairs(adj, rule.body_predicates());
  if (!ps) return {};
  return statistics(*ps, adj.rows(rule.head.predicate));
}

std::uint64_t support(const ClosedPathRule& rule, const KnowledgeGraph& kg) {
  return evaluate(rule, kg).support;
}
double pca_confidence(const ClosedPathRule& rule, const KnowledgeGraph& kg) {
  return evaluate(rule, kg).pca_confidence;
}
double std_confidence(const ClosedPathRule& rule, const KnowledgeGraph& kg) {
  return evaluate(rule, kg).std_confidence;
}

// Rule base -------------------------------------------------------------------

RuleBase::RuleBase(std::vector<ClosedPathRule> rules, MiningParams thresholds)
    : rules_(std::move(rules)), thresholds_(thresholds) {
  for (const auto& r : rules_) r.validate();
  std::stable_sort(rules_.begin(), rules_.end(), [](const ClosedPathRule& a, const ClosedPathRule& b) {
    if (a.head.predicate != b.head.predicate) return a.head.predicate < b.head.predicate;
    auto pa = a.body_predicates(), pb = b.body_predicates();
    if (pa != pb) return pa < pb;
    return a.pca_confidence > b.pca_confidence;
  });
  std::set<std::string> seen;
  std::erase_if(rules_, [&](const ClosedPathRule& r) { return !seen.insert(r.id()).second; });
}

RuleBase RuleBase::merged(const RuleBase& other) const {
  std::vector<ClosedPathRule> all = rules_;
  std::set<std::string> ids;
  for (const auto& r : rules_) ids.insert(r.id());
  for (const auto& r : other.rules_)
    if (!ids.count(r.id())) all.push_back(r);
  MiningParams t;
  t.max_body_length = std::max(thresholds_.max_body_length, other.thresholds_.max_body_length);
  t.min_support = std::min(thresholds_.min_support, other.thresholds_.min_support);
  t.min_pca_confidence = std::min(thresholds_.min_pca_confidence, other.thresholds_.min_pca_confidence);
  return RuleBase(std::move(all), t);
}

RuleBase mine_rules(const KnowledgeGraph& kg, const MiningParams& params) {
  if (params.max_body_length < 1 || params.max_body_length > 3)
    throw ConfigError("max_body_length must be in 1..3");
  if (params.min_support < 1) throw ConfigError("min_support must be >= 1");
  if (params.min_pca_confidence < 0 || params.min_pca_confidence > 1)
    throw ConfigError("min_pca_confidence must be in [0,1]");

  Adjacency adj(kg);
  const auto preds = adj.predicates();

  // Every body sequence with a non-empty pair set, collected depth first.
  struct Body {
    std::vector<std::string> preds;
    PairSet pairs;
  };
  std::vector<Body> bodies;
  std::vector<std::string> seq;
  std::function<void(const PairSet*)> grow;
  grow = [&](const PairSet* prefix) {
    for (const auto& p : preds) {
      PairSet next = prefix ? extend(*prefix, *adj.rows(p)) : *adj.rows(p);
      if (empty_pairs(next)) continue;
      seq.push_back(p);
      bodies.push_back(Body{seq, next});
      if (static_cast<int>(seq.size()) < params.max_body_length) grow(&next);
      seq.pop_back();
    }
  };
  grow(nullptr);

  std::vector<std::vector<ClosedPathRule>> found(bodies.size());
  parallel_for(bodies.size(), [&](std::size_t i) {
    for (const auto& head : preds) {
      ClosedPathRule r = ClosedPathRule::chain(bodies[i].preds, head);
      if (r.is_tautology()) continue;
      RuleStatistics s = statistics(bodies[i].pairs, adj.rows(head));
      if (s.support < params.min_support || s.pca_confidence < params.min_pca_confidence) continue;
      r.support = s.support;
      r.std_confidence = s.std_confidence;
      r.pca_confidence = s.pca_confidence;
      found[i].push_back(std::move(r));
    }
  });
  std::vector<ClosedPathRule> rules;
  for (auto& f : found)
    for (auto& r : f) rules.push_back(std::move(r));
  return RuleBase(std::move(rules), params);
}

// Serialization ---------------------------------------------------------------

namespace {

nlohmann::json atom_json(const Atom& a) {
  return {{"p", a.predicate}, {"s", variable_name(a.subject)}, {"o", variable_name(a.object)}};
}

Atom atom_from(const nlohmann::json& j) {
  return Atom{j.at("p").get<std::string>(), parse_variable(j.at("s").get<std::string>()),
              parse_variable(j.at("o").get<std::string>())};
}

}  // namespace

void write_rules_jsonl(std::ostream& out, const RuleBase& rb) {
  const auto& t = rb.thresholds();
  nlohmann::json head = {{"thresholds",
                          {{"max_body_length", t.max_body_length},
                           {"min_support", t.min_support},
                           {"min_pca_confidence", t.min_pca_confidence}}}};
  out << head.dump() << '\n';
  for (const auto& r : rb.rules()) {
    nlohmann::json j;
    j["id"] = r.id();
    j["body"] = nlohmann::json::array();
    for (const auto& a : r.body) j["body"].push_back(atom_json(a));
    j["head"] = atom_json(r.head);
    j["support"] = r.support;
    j["std_conf"] = r.std_confidence;
    j["pca_conf"] = r.pca_confidence;
    out << j.dump() << '\n';
  }
}

RuleBase read_rules_jsonl(std::istream& in) {
  std::vector<ClosedPathRule> rules;
  MiningParams t{3, 1, 0.0};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      if (j.contains("thresholds")) {
        const auto& th = j["thresholds"];
        t.max_body_length = th.value("max_body_length", 3);
        t.min_support = th.value("min_support", std::uint64_t{1});
        t.min_pca_confidence = th.value("min_pca_confidence", 0.0);
        continue;
      }
      ClosedPathRule r;
      for (const auto& a : j.at("body")) r.body.push_back(atom_from(a));
      r.head = atom_from(j.at("head"));
      r.support = j.value("support", std::uint64_t{0});
      r.std_confidence = j.value("std_conf", 1.0);
      r.pca_confidence = j.value("pca_conf", 1.0);
      r.validate();
      rules.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("rules JSONL: ") + e.what(), line_no);
    } catch (const DataError& e) {
      throw ParseError(std::string("rules JSONL: ") + e.what(), line_no);
    }
  }
  return RuleBase(std::move(rules), t);
}

void write_rules_text(std::ostream& out, const RuleBase& rb) {
  for (const auto& r : rb.rules()) out << r.to_text() << '\n';
}

// Entailment ------------------------------------------------------------------

InferenceClosure::InferenceClosure(const RuleBase& rb, const KnowledgeGraph& kg) {
  for (const auto& t : kg.triples()) facts_.emplace(t, Entailment{true, 1.0, {}});

  // pred -> subject -> object -> index into facts_ (by iterator).
  using Row = std::map<std::string, std::map<std::string, double>>;
  std::map<std::string, Row> by_pred;
  for (const auto& [t, e] : facts_) by_pred[t.predicate][t.subject][t.object] = e.confidence;

  const std::size_t n_entities = std::max<std::size_t>(1, kg.entities().size());
  const std::size_t max_rounds = n_entities * n_entities;

  for (std::size_t round = 0;; ++round) {
    if (round >= max_rounds) {
      capped_ = true;
      break;
    }
    bool changed = false;
    for (const auto& rule : rb.rules()) {
      if (rule.pca_confidence <= 0) continue;
      const std::string rid = rule.id();
      auto first = by_pred.find(rule.body[0].predicate);
      if (first == by_pred.end()) continue;
      // Max-product path composition layer by layer, per start x.
      std::vector<std::pair<std::string, std::map<std::string, double>>> starts;
      for (const auto& [x, objs] : first->second) starts.emplace_back(x, objs);
      for (auto& [x, frontier] : starts) {
        for (std::size_t k = 1; k < rule.body.size() && !frontier.empty(); ++k) {
          std::map<std::string, double> next;
          auto rows = by_pred.find(rule.body[k].predicate);
          if (rows == by_pred.end()) {
            frontier.clear();
            break;
          }
          for (const auto& [z, c] : frontier) {
            auto row = rows->second.find(z);
            if (row == rows->second.end()) continue;
            for (const auto& [y, c2] : row->second) {
              double v = c * c2;
              auto [it, ins] = next.emplace(y, v);
              if (!ins && v > it->second) it->second = v;
            }
          }
          frontier = std::move(next);
        }
        for (const auto& [y, c] : frontier) {
          double conf = c * rule.pca_confidence;
          Triple head{x, rule.head.predicate, y};
          auto [it, inserted] = facts_.emplace(head, Entailment{true, conf, rid});
          if (inserted) {
            ++derived_;
          } else if (conf > it->second.confidence) {
            it->second.confidence = conf;
            it->second.rule_id = rid;
          } else {
            continue;
          }
          by_pred[head.predicate][x][y] = conf;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
}

Entailment InferenceClosure::query(const Triple& fact) const {
  auto it = facts_.find(fact);
  return it == facts_.end() ? Entailment{} : it->second;
}

std::vector<std::pair<Triple, Entailment>> InferenceClosure::with_predicate(const std::string& predicate) const {
  std::vector<std::pair<Triple, Entailment>> out;
  for (const auto& [t, e] : facts_)
    if (t.predicate == predicate) out.emplace_back(t, e);
  return out;
}

Entailment entails(const RuleBase& rb, const KnowledgeGraph& kg, const Triple& fact) {
  return InferenceClosure(rb, kg).query(fact);
}

}  // namespace kcpm
