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
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kcpm::cli {

/// Bad flag value or config entry; reported as a usage error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run can be configured with. Field defaults are the CLI
/// defaults; a config file overrides them and flags override both.
struct Settings {
  // [paths]
  std::string log, kg, context, labels, rules, alias, model, dfg, mapping;
  std::string out = "out";
  // [mining]
  double dependency_threshold = 0.5;
  std::uint64_t frequency_threshold = 1;
  bool all_tasks_connected = false;
  double long_distance_threshold = -1;
  // [rules]
  bool mine = true;
  int max_body_length = 3;
  std::uint64_t min_support = 1;
  double min_pca_confidence = 0.8;
  // [filter]
  std::string mode = "permissive";
  // [augment]
  double theta = 0.5;
  bool strict_ordering = false;
  bool use_scorer = false;
  // [scorer]
  int scorer_dimension = 16;
  double scorer_margin = 1.0;
  double scorer_learning_rate = 0.05;
  int scorer_epochs = 100;
  int scorer_negatives = 5;
  int time_buckets = 24;
  // [variants]
  int variant_dimension = 16;
  double variant_margin = 1.0;
  double variant_learning_rate = 0.05;
  int variant_epochs = 150;
  int variant_negatives = 2;
  double classification_weight = 1.0;
  std::vector<std::string> attributes;
  // [synth]
  std::uint64_t cases = 1000;
  double drop_rate = 0;
  double noise_rate = 0;
  std::vector<std::string> noise_alphabet;
  // [run]
  std::uint64_t seed = 42;
  unsigned threads = 0;

  /// Range checks; throws UsageError.
  void validate() const;
};

using Member = std::variant<std::string Settings::*, double Settings::*, std::uint64_t Settings::*, int Settings::*,
                            unsigned Settings::*, bool Settings::*, std::vector<std::string> Settings::*>;

/// One configurable setting: its config location and command-line flag.
struct Field {
  const char* section;
  const char* key;
  const char* flag;
  const char* help;
  Member member;
};

const std::vector<Field>& settings_fields();

using ConfigValue = std::variant<std::string, std::int64_t, double, bool, std::vector<std::string>>;
/// section -> key -> value; keys before any section live under "".
using ConfigDocument = std::map<std::string, std::map<std::string, ConfigValue>>;

/// TOML-style subset: `[section]`, `key = value` with quoted strings,
/// integers, reals, true/false and arrays of strings; `#` comments.
ConfigDocument parse_config(std::istream& in);

/// Applies a document to `s`, rejecting unknown sections, unknown keys and
/// ill-typed values. Relative input paths are resolved against `base_dir`.
void apply_config(const ConfigDocument& doc, Settings& s, const std::string& base_dir = {});

/// Canonical `section.key = value` listing of every setting except the
/// output directory; the manifest hashes this text.
std::string canonical_settings(const Settings& s);

}  // namespace kcpm::cli
