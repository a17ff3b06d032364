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
#include <charconv>
#include <istream>
#include <ostream>

#include "csv.hpp"
#include "kcpm/event_log.hpp"
#include "xml.hpp"

namespace kcpm {

namespace {

constexpr std::string_view kConceptName = "concept:name";
constexpr std::string_view kTimestamp = "time:timestamp";
constexpr std::string_view kResource = "org:resource";

bool is_attribute_element(const std::string& n) {
  return n == "string" || n == "date" || n == "int" || n == "float" || n == "boolean" ||
         n == "id" || n == "list" || n == "container";
}

[[noreturn]] void bad_value(const xml::Element& el, const std::string& what) {
  throw ParseError("XES: " + what, el.line, el.column);
}

AttributeValue typed_value(const xml::Element& el) {
  const std::string* v = el.attribute("value");
  if (!v) bad_value(el, "<" + el.name + "> without value");
  const std::string& text = *v;
  if (el.name == "date") {
    auto t = parse_iso8601(text);
    if (!t) bad_value(el, "invalid date '" + text + "'");
    return *t;
  }
  if (el.name == "int") {
    std::int64_t i = 0;
    std::string s = trim(text);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ec != std::errc() || p != s.data() + s.size()) bad_value(el, "invalid int '" + text + "'");
    return i;
  }
  if (el.name == "float") {
    double d = 0;
    std::string s = trim(text);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || p != s.data() + s.size()) bad_value(el, "invalid float '" + text + "'");
    return d;
  }
  if (el.name == "boolean") {
    std::string s = trim(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true") return true;
    if (s == "false") return false;
    bad_value(el, "invalid boolean '" + text + "'");
  }
  return text;
}

void put_unique(Attributes& out, std::string key, AttributeValue value) {
  if (out.emplace(key, value).second) return;
  for (int n = 1;; ++n) {
    std::string alt = key + "." + std::to_string(n);
    if (out.emplace(alt, value).second) return;
  }
}

// Flattens one attribute element (and any nested ones) into dotted keys.
void flatten(const xml::Element& el, const std::string& prefix, Attributes& out) {
  const std::string* key = el.attribute("key");
  if (!key) bad_value(el, "<" + el.name + "> without key");
  std::string full = prefix.empty() ? *key : prefix + "." + *key;
  if (el.name != "list" && el.name != "container") put_unique(out, full, typed_value(el));
  for (const auto& child : el.children) {
    if (child.name == "values") {
      for (const auto& item : child.children)
        if (is_attribute_element(item.name)) flatten(item, full, out);
    } else if (is_attribute_element(child.name)) {
      flatten(child, full, out);
    }
  }
}

Attributes collect(const xml::Element& el) {
  Attributes attrs;
  for (const auto& child : el.children)
    if (is_attribute_element(child.name)) flatten(child, "", attrs);
  return attrs;
}

template <class T>
std::optional<T> take(Attributes& attrs, std::string_view key) {
  auto it = attrs.find(std::string(key));
  if (it == attrs.end()) return std::nullopt;
  const T* v = std::get_if<T>(&it->second);
  if (!v) return std::nullopt;
  T out = *v;
  attrs.erase(it);
  return out;
}

}  // namespace

EventLog parse_xes(std::istream& in, const XesOptions& options) {
  xml::Element root = xml::parse(in);
  if (root.name != "log") throw ParseError("XES: root element is <" + root.name + ">, expected <log>", root.line, root.column);
  const bool skip = options.on_malformed == MalformedEventPolicy::kSkip;

  Attributes meta = collect(root);
  std::vector<Trace> traces;
  std::size_t trace_index = 0;
  for (const auto& tr : root.children) {
    if (tr.name != "trace") continue;
    Trace trace;
    trace.attributes = collect(tr);
    auto name = take<std::string>(trace.attributes, kConceptName);
    if (!name || trim(*name).empty()) {
      if (skip) {
        ++trace_index;
        continue;
      }
      throw DataError("trace " + std::to_string(trace_index) + " (line " + std::to_string(tr.line) +
                      ") has no concept:name");
    }
    trace.case_id = *name;
    std::size_t event_index = 0;
    for (const auto& ev : tr.children) {
      if (ev.name != "event") continue;
      Event e;
      e.case_id = trace.case_id;
      e.attributes = collect(ev);
      auto activity = take<std::string>(e.attributes, kConceptName);
      auto ts = take<Instant>(e.attributes, kTimestamp);
      if (!activity || trim(*activity).empty() || !ts) {
        if (!skip)
          throw DataError("trace '" + trace.case_id + "' event " + std::to_string(event_index) +
                          " (line " + std::to_string(ev.line) + ") is missing " +
                          (!activity || trim(*activity).empty() ? "concept:name" : "time:timestamp"));
        ++event_index;
        continue;
      }
      e.activity = *activity;
      e.timestamp = *ts;
      e.resource = take<std::string>(e.attributes, kResource);
      trace.events.push_back(std::move(e));
      ++event_index;
    }
    ++trace_index;
    if (trace.events.empty()) continue;
    traces.push_back(std::move(trace));
  }
  return EventLog(std::move(traces), std::move(meta));
}

namespace {

void write_attribute(std::ostream& out, const std::string& indent, const std::string& key,
                     const AttributeValue& v) {
  out << indent << '<' << kind_name(v) << " key=\"" << xml::escape(key) << "\" value=\""
      << xml::escape(to_string(v)) << "\"/>\n";
}

}  // namespace

void write_xes(std::ostream& out, const EventLog& log) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<log xes.version=\"1.0\" xes.features=\"\">\n";
  out << "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n";
  out << "  <extension name=\"Time\" prefix=\"time\" uri=\"http://www.xes-standard.org/time.xesext\"/>\n";
  out << "  <extension name=\"Organizational\" prefix=\"org\" uri=\"http://www.xes-standard.org/org.xesext\"/>\n";
  for (const auto& [k, v] : log.meta()) write_attribute(out, "  ", k, v);
  for (const Trace& t : log.traces()) {
    out << "  <trace>\n";
    write_attribute(out, "    ", std::string(kConceptName), t.case_id);
    for (const auto& [k, v] : t.attributes) write_attribute(out, "    ", k, v);
    for (const Event& e : t.events) {
      out << "    <event>\n";
      write_attribute(out, "      ", std::string(kConceptName), e.activity);
      write_attribute(out, "      ", std::string(kTimestamp), e.timestamp);
      if (e.resource) write_attribute(out, "      ", std::string(kResource), *e.resource);
      for (const auto& [k, v] : e.attributes) write_attribute(out, "      ", k, v);
      out << "    </event>\n";
    }
    out << "  </trace>\n";
  }
  out << "</log>\n";
}

// CSV -------------------------------------------------------------------------

namespace {

std::size_t require_column(const std::map<std::string, std::size_t>& header, const std::string& name,
                           const char* role) {
  auto it = header.find(name);
  if (it == header.end())
    throw ConfigError(std::string("CSV: ") + role + " column '" + name + "' not found in header");
  return it->second;
}

AttributeValue cell_value(const csv::Field& f) {
  if (f.quoted) return f.text;
  return infer_scalar(f.text);
}

}  // namespace

EventLog parse_csv(std::istream& in, const CsvMapping& mapping) {
  csv::Reader reader(in, mapping.delimiter);
  std::vector<csv::Field> row;
  if (!reader.next(row)) return EventLog{};
  std::map<std::string, std::size_t> header;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < row.size(); ++i) {
    std::string n = trim(row[i].text);
    if (!header.emplace(n, i).second) throw ParseError("CSV: duplicate column '" + n + "'", reader.line());
    names.push_back(n);
  }
  const std::size_t case_col = require_column(header, mapping.case_column, "case");
  const std::size_t act_col = require_column(header, mapping.activity_column, "activity");
  const std::size_t ts_col = require_column(header, mapping.timestamp_column, "timestamp");
  std::optional<std::size_t> res_col;
  if (mapping.resource_column) {
    auto it = header.find(*mapping.resource_column);
    // The default mapping names a resource column; only an explicit
    // non-default name is mandatory.
    if (it != header.end()) res_col = it->second;
    else if (*mapping.resource_column != CsvMapping{}.resource_column)
      require_column(header, *mapping.resource_column, "resource");
  }
  std::vector<std::pair<std::string, std::size_t>> attr_cols;
  if (mapping.attribute_columns.empty()) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (i != case_col && i != act_col && i != ts_col && (!res_col || i != *res_col))
        attr_cols.emplace_back(names[i], i);
  } else {
    for (const auto& n : mapping.attribute_columns)
      attr_cols.emplace_back(n, require_column(header, n, "attribute"));
  }

  std::vector<Trace> traces;
  std::map<std::string, std::size_t> by_case;
  while (reader.next(row)) {
    const std::size_t line = reader.line();
    if (row.size() != names.size())
      throw ParseError("CSV: row has " + std::to_string(row.size()) + " fields, header has " +
                           std::to_string(names.size()),
                       line);
    Event e;
    e.case_id = row[case_col].text;
    e.activity = row[act_col].text;
    if (e.case_id.empty()) throw ParseError("CSV: empty case id", line);
    if (trim(e.activity).empty()) throw ParseError("CSV: empty activity", line);
    auto ts = parse_with_format(row[ts_col].text, mapping.timestamp_format);
    if (!ts)
      throw ParseError("CSV: unparseable timestamp '" + row[ts_col].text + "' (format " +
                           mapping.timestamp_format + ")",
                       line);
    e.timestamp = *ts;
    if (res_col && (row[*res_col].quoted || !row[*res_col].text.empty())) e.resource = row[*res_col].text;
    for (const auto& [name, i] : attr_cols) {
      if (!row[i].quoted && row[i].text.empty()) continue;
      e.attributes.emplace(name, cell_value(row[i]));
    }
    auto [it, inserted] = by_case.emplace(e.case_id, traces.size());
    if (inserted) traces.push_back(Trace{e.case_id, {}, {}});
    traces[it->second].events.push_back(std::move(e));
  }
  return EventLog(std::move(traces));
}

void write_csv(std::ostream& out, const EventLog& log) {
  std::set<std::string> keys;
  for (const Trace& t : log.traces())
    for (const Event& e : t.events)
      for (const auto& [k, v] : e.attributes) keys.insert(k);
  std::vector<std::string> cells{"case_id", "activity", "timestamp", "resource"};
  for (const auto& k : keys) cells.push_back(csv::escape(k));
  csv::write_row(out, cells);
  for (const Trace& t : log.traces()) {
    for (const Event& e : t.events) {
      cells.clear();
      cells.push_back(csv::escape(e.case_id));
      cells.push_back(csv::escape(e.activity));
      cells.push_back(format_iso8601(e.timestamp));
      cells.push_back(e.resource ? csv::escape(*e.resource, e.resource->empty()) : std::string());
      for (const auto& k : keys) {
        auto it = e.attributes.find(k);
        if (it == e.attributes.end()) {
          cells.emplace_back();
          continue;
        }
        const AttributeValue& v = it->second;
        std::string text = to_string(v);
        // Quoting marks a string that would otherwise read back as another kind.
        bool force = v.index() == 0 && (text.empty() || infer_scalar(text).index() != 0);
        cells.push_back(csv::escape(text, force));
      }
      csv::write_row(out, cells);
    }
  }
}

ContextTable parse_context_csv(std::istream& in) {
  csv::Reader reader(in);
  std::vector<csv::Field> row;
  ContextTable ctx;
  if (!reader.next(row)) return ctx;
  std::vector<std::string> names;
  std::optional<std::size_t> case_col;
  for (std::size_t i = 0; i < row.size(); ++i) {
    names.push_back(trim(row[i].text));
    if (names.back() == "case_id") case_col = i;
  }
  if (!case_col) throw ConfigError("context CSV: no case_id column");
  while (reader.next(row)) {
    if (row.size() != names.size())
      throw ParseError("context CSV: row has " + std::to_string(row.size()) + " fields, header has " +
                           std::to_string(names.size()),
                       reader.line());
    const std::string& id = row[*case_col].text;
    if (id.empty()) throw ParseError("context CSV: empty case_id", reader.line());
    Attributes& attrs = ctx.rows[id];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == *case_col || (!row[i].quoted && row[i].text.empty())) continue;
      attrs.insert_or_assign(names[i], cell_value(row[i]));
    }
  }
  return ctx;
}

}  // namespace kcpm
