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

#include "kcpm/knowledge_graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "csv.hpp"

namespace kcpm {

KnowledgeGraph::KnowledgeGraph(std::vector<Triple> triples, std::vector<TemporalTriple> temporal)
    : triples_(std::move(triples)), temporal_(std::move(temporal)) {
  auto check = [](const Triple& t) {
    if (t.subject.empty() || t.predicate.empty() || t.object.empty())
      throw DataError("triple with an empty component: (" + t.subject + ", " + t.predicate + ", " +
                      t.object + ")");
  };
  std::sort(temporal_.begin(), temporal_.end());
  temporal_.erase(std::unique(temporal_.begin(), temporal_.end()), temporal_.end());
  for (const auto& tt : temporal_) {
    check(tt.triple);
    triples_.push_back(tt.triple);
  }
  for (const auto& t : triples_) check(t);
  std::sort(triples_.begin(), triples_.end());
  triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
  for (std::uint32_t i = 0; i < triples_.size(); ++i) {
    by_subject_[triples_[i].subject].push_back(i);
    by_predicate_[triples_[i].predicate].push_back(i);
    by_object_[triples_[i].object].push_back(i);
  }
}

bool KnowledgeGraph::contains(const Triple& t) const {
  return std::binary_search(triples_.begin(), triples_.end(), t);
}

bool KnowledgeGraph::has_entity(const std::string& id) const {
  return by_subject_.count(id) > 0 || by_object_.count(id) > 0;
}

std::vector<std::string> KnowledgeGraph::entities() const {
  std::set<std::string> out;
  for (const auto& [k, v] : by_subject_) out.insert(k);
  for (const auto& [k, v] : by_object_) out.insert(k);
  return {out.begin(), out.end()};
}

std::vector<std::string> KnowledgeGraph::predicates() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : by_predicate_) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::uint32_t>& KnowledgeGraph::lookup(const Index& idx, const std::string& key) {
  static const std::vector<std::uint32_t> kEmpty;
  auto it = idx.find(key);
  return it == idx.end() ? kEmpty : it->second;
}

const std::vector<std::uint32_t>& KnowledgeGraph::by_subject(const std::string& s) const {
  return lookup(by_subject_, s);
}
const std::vector<std::uint32_t>& KnowledgeGraph::by_predicate(const std::string& p) const {
  return lookup(by_predicate_, p);
}
const std::vector<std::uint32_t>& KnowledgeGraph::by_object(const std::string& o) const {
  return lookup(by_object_, o);
}

std::vector<Triple> KnowledgeGraph::query(const TriplePattern& pattern) const {
  auto matches = [&](const Triple& t) {
    return (!pattern.subject || t.subject == *pattern.subject) &&
           (!pattern.predicate || t.predicate == *pattern.predicate) &&
           (!pattern.object || t.object == *pattern.object);
  };
  // Scan the smallest applicable index.
  const std::vector<std::uint32_t>* best = nullptr;
  auto consider = [&](const std::vector<std::uint32_t>& cand) {
    if (!best || cand.size() < best->size()) best = &cand;
  };
  if (pattern.subject) consider(by_subject(*pattern.subject));
  if (pattern.predicate) consider(by_predicate(*pattern.predicate));
  if (pattern.object) consider(by_object(*pattern.object));
  std::vector<Triple> out;
  if (!best) return triples_;
  for (auto i : *best)
    if (matches(triples_[i])) out.push_back(triples_[i]);
  return out;
}

KnowledgeGraph KnowledgeGraph::with(const std::vector<Triple>& extra) const {
  std::vector<Triple> all;
  all.reserve(triples_.size() + extra.size());
  // Temporal projections are re-added by the constructor.
  for (const auto& t : triples_) all.push_back(t);
  all.insert(all.end(), extra.begin(), extra.end());
  return KnowledgeGraph(std::move(all), temporal_);
}

// Loading ---------------------------------------------------------------------

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

class NTriplesLine {
 public:
  NTriplesLine(const std::string& s, std::size_t line) : s_(s), line_(line) {}

  std::string term(bool allow_literal) {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of line");
    char c = s_[pos_];
    if (c == '<') {
      auto close = s_.find('>', pos_);
      if (close == std::string::npos) fail("unterminated IRI");
      std::string iri = s_.substr(pos_ + 1, close - pos_ - 1);
      if (iri.empty()) fail("empty IRI");
      pos_ = close + 1;
      return iri;
    }
    if (c == '_' ) fail("blank nodes are not supported");
    if (c == '"') {
      if (!allow_literal) fail("literal not allowed here");
      ++pos_;
      std::string out;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
          char e = s_[++pos_];
          switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            default: out += e;
          }
          ++pos_;
          continue;
        }
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) fail("unterminated literal");
      ++pos_;
      // Language tag or datatype are dropped.
      if (pos_ < s_.size() && s_[pos_] == '@') {
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '.') ++pos_;
      } else if (s_.compare(pos_, 2, "^^") == 0) {
        pos_ += 2;
        term(false);
      }
      if (out.empty()) fail("empty literal");
      return out;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void end() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '.') fail("expected '.'");
    ++pos_;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("trailing content after '.'");
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("N-Triples: " + what, line_, pos_ + 1);
  }
  const std::string& s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

KnowledgeGraph load_triples(std::istream& in, TripleFormat format) {
  std::vector<Triple> triples;
  std::vector<TemporalTriple> temporal;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (format == TripleFormat::kTsv) {
      auto cols = split_tabs(line);
      if (cols.size() != 3 && cols.size() != 4)
        throw ParseError("TSV: expected 3 or 4 tab-separated columns, found " + std::to_string(cols.size()),
                         line_no);
      for (auto& c : cols) c = trim(c);
      Triple tr{cols[0], cols[1], cols[2]};
      if (tr.subject.empty() || tr.predicate.empty() || tr.object.empty())
        throw ParseError("TSV: empty triple component", line_no);
      if (cols.size() == 4) {
        auto ts = parse_iso8601(cols[3]);
        if (!ts) throw ParseError("TSV: invalid timestamp '" + cols[3] + "'", line_no);
        temporal.push_back({std::move(tr), *ts});
      } else {
        triples.push_back(std::move(tr));
      }
    } else {
      NTriplesLine p(line, line_no);
      Triple tr;
      tr.subject = p.term(false);
      tr.predicate = p.term(false);
      tr.object = p.term(true);
      p.end();
      triples.push_back(std::move(tr));
    }
  }
  return KnowledgeGraph(std::move(triples), std::move(temporal));
}

void write_triples_tsv(std::ostream& out, const KnowledgeGraph& kg) {
  std::set<Triple> temporal_only;
  for (const auto& tt : kg.temporal()) temporal_only.insert(tt.triple);
  for (const auto& t : kg.triples())
    if (!temporal_only.count(t)) out << t.subject << '\t' << t.predicate << '\t' << t.object << '\n';
  for (const auto& tt : kg.temporal())
    out << tt.triple.subject << '\t' << tt.triple.predicate << '\t' << tt.triple.object << '\t'
        << format_iso8601(tt.timestamp) << '\n';
}

// Aliases ---------------------------------------------------------------------

AliasMap::AliasMap(std::map<std::string, std::string> explicit_aliases)
    : aliases_(std::move(explicit_aliases)) {
  for (const auto& [activity, entity] : aliases_) reverse_.try_emplace(entity, activity);
}

std::optional<std::string> AliasMap::resolve(const std::string& activity,
                                             const KnowledgeGraph& kg) const {
  auto it = aliases_.find(activity);
  if (it != aliases_.end()) return it->second;
  if (kg.has_entity(activity)) return activity;
  return std::nullopt;
}

std::string AliasMap::activity_for(const std::string& entity) const {
  auto it = reverse_.find(entity);
  return it == reverse_.end() ? entity : it->second;
}

AliasMap parse_alias_csv(std::istream& in) {
  csv::Reader reader(in);
  std::vector<csv::Field> row;
  std::map<std::string, std::string> m;
  if (!reader.next(row)) return AliasMap{};
  if (row.size() != 2) throw ParseError("alias CSV: expected 2 columns (activity,entity)", reader.line());
  while (reader.next(row)) {
    if (row.size() != 2) throw ParseError("alias CSV: expected 2 columns", reader.line());
    if (row[0].text.empty() || row[1].text.empty()) throw ParseError("alias CSV: empty cell", reader.line());
    m[row[0].text] = row[1].text;
  }
  return AliasMap(std::move(m));
}

}  // namespace kcpm
