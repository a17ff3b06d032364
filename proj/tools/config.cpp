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

#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <istream>
#include <limits>
#include <sstream>
#include <type_traits>

namespace kcpm::cli {

namespace {

using S = Settings;

std::string where(std::size_t line) { return "config line " + std::to_string(line) + ": "; }

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool bare_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

/// Reads a double-quoted string starting at text[i]; advances i past it.
std::string quoted(const std::string& text, std::size_t& i, std::size_t line) {
  std::string out;
  for (++i; i < text.size(); ++i) {
    char c = text[i];
    if (c == '"') {
      ++i;
      return out;
    }
    if (c == '\\') {
      if (++i == text.size()) break;
      switch (text[i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: throw UsageError(where(line) + "unknown escape \\" + std::string(1, text[i]));
      }
      continue;
    }
    out += c;
  }
  throw UsageError(where(line) + "unterminated string");
}

/// Drops a trailing comment that is not inside a string.
std::string without_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && in_str) {
      ++i;
      continue;
    }
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

ConfigValue scalar(const std::string& text, std::size_t line) {
  if (text == "true") return true;
  if (text == "false") return false;
  std::string t;
  for (char c : text)
    if (c != '_') t += c;
  std::int64_t i = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), i);
  if (ec == std::errc() && p == t.data() + t.size()) return i;
  double d = 0;
  auto [q, ec2] = std::from_chars(t.data(), t.data() + t.size(), d);
  if (ec2 == std::errc() && q == t.data() + t.size() && std::isfinite(d)) return d;
  throw UsageError(where(line) + "cannot read value '" + text + "'");
}

ConfigValue value(const std::string& text, std::size_t line) {
  if (text.empty()) throw UsageError(where(line) + "missing value");
  if (text[0] == '"') {
    std::size_t i = 0;
    std::string s = quoted(text, i, line);
    if (!strip(text.substr(i)).empty()) throw UsageError(where(line) + "text after string");
    return s;
  }
  if (text[0] == '[') {
    std::vector<std::string> items;
    std::size_t i = 1;
    auto skip = [&] {
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    skip();
    if (i < text.size() && text[i] == ']') return items;
    while (true) {
      skip();
      if (i >= text.size() || text[i] != '"') throw UsageError(where(line) + "arrays hold quoted strings only");
      items.push_back(quoted(text, i, line));
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        skip();
        if (i < text.size() && text[i] == ']') break;  // trailing comma
        continue;
      }
      if (i < text.size() && text[i] == ']') break;
      throw UsageError(where(line) + "malformed array");
    }
    if (!strip(text.substr(i + 1)).empty()) throw UsageError(where(line) + "text after array");
    return items;
  }
  return scalar(text, line);
}

std::string type_name(const ConfigValue& v) {
  static const char* names[] = {"string", "integer", "real", "boolean", "array"};
  return names[v.index()];
}

std::string fmt_double(double d) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, r.ptr);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

const std::vector<Field>& settings_fields() {
  static const std::vector<Field> kFields = {
      {"paths", "log", "--log", "Event log (.xes or .csv)", &S::log},
      {"paths", "kg", "--kg", "Knowledge graph (.tsv or .nt)", &S::kg},
      {"paths", "context", "--context", "Per-case context CSV", &S::context},
      {"paths", "labels", "--labels", "Variant labels CSV (case_id,class)", &S::labels},
      {"paths", "rules", "--rules", "Rule base (JSONL)", &S::rules},
      {"paths", "alias", "--alias", "Activity alias CSV", &S::alias},
      {"paths", "model", "--model", "Reference model (dependency graph or ground-truth JSON)", &S::model},
      {"paths", "dfg", "--dfg", "Dependency graph JSON to filter", &S::dfg},
      {"paths", "mapping", "--mapping", "CSV column mapping (JSON)", &S::mapping},
      {"paths", "out", "--out", "Output directory", &S::out},
      {"mining", "dependency_threshold", "--dependency-threshold", "Minimum dependency measure", &S::dependency_threshold},
      {"mining", "frequency_threshold", "--frequency-threshold", "Minimum directly-follows count", &S::frequency_threshold},
      {"mining", "all_tasks_connected", "--all-tasks-connected", "Force every activity to be connected", &S::all_tasks_connected},
      {"mining", "long_distance_threshold", "--long-distance-threshold", "Long-distance threshold (negative disables)",
       &S::long_distance_threshold},
      {"rules", "mine", "--mine-rules", "Mine rules from the knowledge graph", &S::mine},
      {"rules", "max_body_length", "--max-body-length", "Longest rule body", &S::max_body_length},
      {"rules", "min_support", "--min-support", "Minimum rule support", &S::min_support},
      {"rules", "min_pca_confidence", "--min-pca-confidence", "Minimum PCA confidence", &S::min_pca_confidence},
      {"filter", "mode", "--mode", "Filtering mode: strict or permissive", &S::mode},
      {"augment", "theta", "--theta", "Acceptance threshold for inserted events", &S::theta},
      {"augment", "strict_ordering", "--strict-ordering", "Also remove events missing a required predecessor",
       &S::strict_ordering},
      {"augment", "use_scorer", "--use-scorer", "Train the temporal scorer for insertion decisions", &S::use_scorer},
      {"scorer", "dimension", "--scorer-dimension", "Temporal scorer embedding size", &S::scorer_dimension},
      {"scorer", "margin", "--scorer-margin", "Temporal scorer ranking margin", &S::scorer_margin},
      {"scorer", "learning_rate", "--scorer-learning-rate", "Temporal scorer step size", &S::scorer_learning_rate},
      {"scorer", "epochs", "--scorer-epochs", "Temporal scorer epochs", &S::scorer_epochs},
      {"scorer", "negatives", "--scorer-negatives", "Negatives per positive", &S::scorer_negatives},
      {"scorer", "time_buckets", "--time-buckets", "Slices of the day", &S::time_buckets},
      {"variants", "dimension", "--variant-dimension", "Variant embedding size", &S::variant_dimension},
      {"variants", "margin", "--variant-margin", "Variant ranking margin", &S::variant_margin},
      {"variants", "learning_rate", "--variant-learning-rate", "Variant step size", &S::variant_learning_rate},
      {"variants", "epochs", "--variant-epochs", "Variant epochs", &S::variant_epochs},
      {"variants", "negatives", "--variant-negatives", "Negatives per graph edge", &S::variant_negatives},
      {"variants", "classification_weight", "--classification-weight", "Weight of the label loss",
       &S::classification_weight},
      {"variants", "attributes", "--attributes", "Event attributes promoted to graph nodes", &S::attributes},
      {"synth", "cases", "--cases", "Number of simulated cases", &S::cases},
      {"synth", "drop_rate", "--drop-rate", "Probability of dropping each event", &S::drop_rate},
      {"synth", "noise_rate", "--noise-rate", "Expected noise events per event", &S::noise_rate},
      {"synth", "noise_alphabet", "--noise-alphabet", "Activities used as noise", &S::noise_alphabet},
      {"run", "seed", "--seed", "Random seed", &S::seed},
      {"run", "threads", "--threads", "Worker threads (0: KCPM_THREADS or all cores)", &S::threads},
  };
  return kFields;
}

void Settings::validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0 && v <= 1)) throw UsageError(std::string(name) + " must lie in [0, 1]");
  };
  if (!(dependency_threshold >= -1 && dependency_threshold <= 1))
    throw UsageError("dependency_threshold must lie in [-1, 1]");
  if (long_distance_threshold > 1) throw UsageError("long_distance_threshold must be at most 1");
  if (max_body_length < 1 || max_body_length > 3) throw UsageError("max_body_length must lie in [1, 3]");
  unit(min_pca_confidence, "min_pca_confidence");
  if (mode != "strict" && mode != "permissive") throw UsageError("mode must be strict or permissive");
  unit(theta, "theta");
  unit(drop_rate, "drop_rate");
  unit(noise_rate, "noise_rate");
  auto positive = [](long long v, const char* name) {
    if (v < 1) throw UsageError(std::string(name) + " must be positive");
  };
  positive(scorer_dimension, "scorer dimension");
  positive(variant_dimension, "variant dimension");
  positive(scorer_negatives, "scorer negatives");
  positive(variant_negatives, "variant negatives");
  positive(static_cast<long long>(cases), "cases");
  if (scorer_epochs < 0 || variant_epochs < 0) throw UsageError("epochs must be non-negative");
  if (!(scorer_margin > 0) || !(variant_margin > 0)) throw UsageError("margins must be positive");
  if (!(scorer_learning_rate > 0) || !(variant_learning_rate > 0)) throw UsageError("learning rates must be positive");
  if (time_buckets < 1 || time_buckets > 1440) throw UsageError("time_buckets must lie in [1, 1440]");
  if (!(classification_weight >= 0)) throw UsageError("classification_weight must be non-negative");
  if (threads > 1024) throw UsageError("threads must be at most 1024");
}

ConfigDocument parse_config(std::istream& in) {
  ConfigDocument doc;
  std::string section;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    std::string text = strip(without_comment(raw));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw UsageError(where(line) + "malformed section header");
      section = strip(text.substr(1, text.size() - 2));
      if (!bare_key(section)) throw UsageError(where(line) + "bad section name '" + section + "'");
      doc[section];
      continue;
    }
    auto eq = text.find('=');
    if (eq == std::string::npos) throw UsageError(where(line) + "expected key = value");
    std::string key = strip(text.substr(0, eq));
    if (!bare_key(key)) throw UsageError(where(line) + "bad key '" + key + "'");
    auto [it, fresh] = doc[section].emplace(key, value(strip(text.substr(eq + 1)), line));
    if (!fresh) throw UsageError(where(line) + "duplicate key '" + key + "'");
  }
  return doc;
}

void apply_config(const ConfigDocument& doc, Settings& s, const std::string& base_dir) {
  for (const auto& [section, entries] : doc) {
    for (const auto& [key, v] : entries) {
      const Field* f = nullptr;
      for (const auto& cand : settings_fields())
        if (section == cand.section && key == cand.key) f = &cand;
      if (!f) {
        bool known_section = false;
        for (const auto& cand : settings_fields()) known_section |= section == cand.section;
        throw UsageError(known_section ? "unknown key '" + key + "' in [" + section + "]"
                                       : "unknown section [" + section + "]");
      }
      const std::string name = section + "." + key;
      auto bad = [&](const char* want) {
        return UsageError(name + " expects " + want + ", got " + type_name(v));
      };
      std::visit(
          [&](auto member) {
            using T = std::remove_reference_t<decltype(s.*member)>;
            if constexpr (std::is_same_v<T, std::string>) {
              if (!std::holds_alternative<std::string>(v)) throw bad("a string");
              s.*member = std::get<std::string>(v);
              // Input paths are relative to the config file; out stays relative to the caller.
              std::string& path = s.*member;
              if (section == "paths" && key != "out" && !base_dir.empty() && !path.empty() &&
                  std::filesystem::path(path).is_relative())
                path = (std::filesystem::path(base_dir) / path).lexically_normal().string();
            } else if constexpr (std::is_same_v<T, bool>) {
              if (!std::holds_alternative<bool>(v)) throw bad("a boolean");
              s.*member = std::get<bool>(v);
            } else if constexpr (std::is_same_v<T, double>) {
              if (auto* i = std::get_if<std::int64_t>(&v)) s.*member = static_cast<double>(*i);
              else if (auto* d = std::get_if<double>(&v)) s.*member = *d;
              else throw bad("a number");
            } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
              if (!std::holds_alternative<std::vector<std::string>>(v)) throw bad("an array of strings");
              s.*member = std::get<std::vector<std::string>>(v);
            } else {
              auto* i = std::get_if<std::int64_t>(&v);
              if (!i) throw bad("an integer");
              if (*i < 0 && !std::is_signed_v<T>) throw UsageError(name + " must be non-negative");
              if (*i > static_cast<std::int64_t>(std::numeric_limits<int>::max()) && std::is_same_v<T, int>)
                throw UsageError(name + " is out of range");
              s.*member = static_cast<T>(*i);
            }
          },
          f->member);
    }
  }
}

std::string canonical_settings(const Settings& s) {
  std::ostringstream out;
  for (const auto& f : settings_fields()) {
    if (std::string(f.key) == "out" || std::string(f.key) == "threads") continue;
    out << f.section << '.' << f.key << " = ";
    std::visit(
        [&](auto member) {
          const auto& v = s.*member;
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>) out << quote(v);
          else if constexpr (std::is_same_v<T, bool>) out << (v ? "true" : "false");
          else if constexpr (std::is_same_v<T, double>) out << fmt_double(v);
          else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
            out << '[';
            for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << quote(v[i]);
            out << ']';
          } else out << v;
        },
        f.member);
    out << '\n';
  }
  return out.str();
}

}  // namespace kcpm::cli
