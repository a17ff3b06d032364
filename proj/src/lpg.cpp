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

#include <algorithm>
#include <ostream>

#include "csv.hpp"
#include "kcpm/knowledge_graph.hpp"
#include "xml.hpp"

namespace kcpm {

namespace lpg_id {
std::string event(const std::string& case_id, std::size_t index) {
  return "event:" + case_id + "#" + std::to_string(index);
}
std::string case_node(const std::string& case_id) { return "case:" + case_id; }
std::string activity(const std::string& name) { return "activity:" + name; }
std::string resource(const std::string& name) { return "resource:" + name; }
std::string entity(const std::string& id) { return "entity:" + id; }
std::string attribute_value(const std::string& key, const std::string& value) {
  return "value:" + key + "=" + value;
}
}  // namespace lpg_id

std::size_t LabeledPropertyGraph::add_node(const std::string& id, const std::string& label) {
  auto [it, inserted] = index_.emplace(id, nodes_.size());
  if (inserted) nodes_.push_back(LpgNode{id, {label}, {}});
  else nodes_[it->second].labels.insert(label);
  return it->second;
}

std::size_t LabeledPropertyGraph::add_edge(std::size_t source, std::size_t target,
                                           const std::string& label) {
  edges_.push_back(LpgEdge{edges_.size(), source, target, {label}, {}});
  return edges_.back().id;
}

std::optional<std::size_t> LabeledPropertyGraph::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::size_t>& LabeledPropertyGraph::case_events(const std::string& case_id) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = case_events_.find(case_id);
  return it == case_events_.end() ? kEmpty : it->second;
}

std::vector<std::string> LabeledPropertyGraph::case_ids() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : case_events_) out.push_back(k);
  return out;
}

void LabeledPropertyGraph::append_case_event(const std::string& case_id, std::size_t node) {
  case_events_[case_id].push_back(node);
}

std::size_t LabeledPropertyGraph::count_label(const std::string& label) const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [&](const LpgNode& n) { return n.labels.count(label) > 0; }));
}

LabeledPropertyGraph build_lpg(const EventLog& log, const KnowledgeGraph& kg,
                               const LpgOptions& options) {
  LabeledPropertyGraph g;
  // Entities first so that merged activity nodes keep a stable id.
  for (const auto& e : kg.entities()) g.add_node(lpg_id::entity(e), "Entity");
  for (const auto& t : kg.triples())
    g.add_edge(*g.find(lpg_id::entity(t.subject)), *g.find(lpg_id::entity(t.object)), t.predicate);

  std::map<std::string, std::size_t> activity_nodes;
  for (const auto& a : log.alphabet()) {
    auto entity = options.aliases.resolve(a, kg);
    std::size_t n = entity && kg.has_entity(*entity) ? g.add_node(lpg_id::entity(*entity), "Activity")
                                                     : g.add_node(lpg_id::activity(a), "Activity");
    g.node(n).props.emplace("name", a);
    activity_nodes.emplace(a, n);
  }

  for (const Trace& trace : log.traces()) {
    std::size_t case_node = g.add_node(lpg_id::case_node(trace.case_id), "Case");
    g.node(case_node).props.emplace("case_id", trace.case_id);
    for (const auto& [k, v] : trace.attributes) g.node(case_node).props.emplace(k, v);
    std::optional<std::size_t> prev;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
      const Event& e = trace.events[i];
      std::size_t n = g.add_node(lpg_id::event(trace.case_id, i), "Event");
      LpgNode& node = g.node(n);
      node.props.emplace("case_id", e.case_id);
      node.props.emplace("activity", e.activity);
      node.props.emplace("timestamp", e.timestamp);
      if (e.resource) node.props.emplace("resource", *e.resource);
      for (const auto& [k, v] : e.attributes) node.props.emplace(k, v);
      g.append_case_event(trace.case_id, n);

      g.add_edge(n, case_node, "BELONGS_TO");
      g.add_edge(n, activity_nodes.at(e.activity), "INSTANCE_OF");
      if (e.resource) g.add_edge(n, g.add_node(lpg_id::resource(*e.resource), "Resource"), "PERFORMED_BY");
      for (const auto& key : options.attribute_nodes) {
        auto it = e.attributes.find(key);
        if (it == e.attributes.end()) continue;
        std::size_t v = g.add_node(lpg_id::attribute_value(key, to_string(it->second)), "AttributeValue");
        g.node(v).props.try_emplace("key", key);
        g.node(v).props.try_emplace("value", it->second);
        g.add_edge(n, v, "HAS_" + key);
      }
      if (prev) g.add_edge(*prev, n, "DF");
      prev = n;
    }
  }
  return g;
}

// Export ----------------------------------------------------------------------

namespace {

std::string join_labels(const std::set<std::string>& labels, char sep) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += sep;
    out += l;
  }
  return out;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::set<std::string> prop_keys(const LabeledPropertyGraph& g, bool nodes) {
  std::set<std::string> keys;
  if (nodes) {
    for (const auto& n : g.nodes())
      for (const auto& [k, v] : n.props) keys.insert(k);
  } else {
    for (const auto& e : g.edges())
      for (const auto& [k, v] : e.props) keys.insert(k);
  }
  return keys;
}

}  // namespace

void write_graphml(std::ostream& out, const LabeledPropertyGraph& g) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"labels\" for=\"all\" attr.name=\"labels\" attr.type=\"string\"/>\n";
  auto node_keys = prop_keys(g, true);
  std::size_t k = 0;
  std::map<std::string, std::string> key_ids;
  for (const auto& key : node_keys) {
    std::string id = "n" + std::to_string(k++);
    key_ids[key] = id;
    out << "  <key id=\"" << id << "\" for=\"node\" attr.name=\"" << xml::escape(key)
        << "\" attr.type=\"string\"/>\n";
  }
  out << "  <graph id=\"G\" edgedefault=\"directed\">\n";
  for (const auto& n : g.nodes()) {
    out << "    <node id=\"" << xml::escape(n.id) << "\">\n"
        << "      <data key=\"labels\">" << xml::escape(join_labels(n.labels, ':')) << "</data>\n";
    for (const auto& [key, v] : n.props)
      out << "      <data key=\"" << key_ids[key] << "\">" << xml::escape(to_string(v)) << "</data>\n";
    out << "    </node>\n";
  }
  for (const auto& e : g.edges()) {
    out << "    <edge id=\"e" << e.id << "\" source=\"" << xml::escape(g.nodes()[e.source].id)
        << "\" target=\"" << xml::escape(g.nodes()[e.target].id) << "\">\n"
        << "      <data key=\"labels\">" << xml::escape(join_labels(e.labels, ':')) << "</data>\n"
        << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_lpg_nodes_csv(std::ostream& out, const LabeledPropertyGraph& g) {
  auto keys = prop_keys(g, true);
  std::vector<std::string> cells{"id", "labels"};
  for (const auto& k : keys) cells.push_back(csv::escape(k));
  csv::write_row(out, cells);
  for (const auto& n : g.nodes()) {
    cells = {csv::escape(n.id), csv::escape(join_labels(n.labels, ';'))};
    for (const auto& k : keys) {
      auto it = n.props.find(k);
      cells.push_back(it == n.props.end() ? std::string() : csv::escape(to_string(it->second)));
    }
    csv::write_row(out, cells);
  }
}

void write_lpg_edges_csv(std::ostream& out, const LabeledPropertyGraph& g) {
  csv::write_row(out, {"id", "source", "target", "labels"});
  for (const auto& e : g.edges())
    csv::write_row(out, {std::to_string(e.id), csv::escape(g.nodes()[e.source].id),
                         csv::escape(g.nodes()[e.target].id), csv::escape(join_labels(e.labels, ';'))});
}

void write_lpg_dot(std::ostream& out, const LabeledPropertyGraph& g) {
  out << "digraph lpg {\n  node [shape=box, fontsize=10];\n";
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    const auto& n = g.nodes()[i];
    out << "  n" << i << " [label=" << dot_quote(n.id + "\n" + join_labels(n.labels, ':')) << "];\n";
  }
  for (const auto& e : g.edges())
    out << "  n" << e.source << " -> n" << e.target << " [label=" << dot_quote(join_labels(e.labels, ':'))
        << "];\n";
  out << "}\n";
}

}  // namespace kcpm
