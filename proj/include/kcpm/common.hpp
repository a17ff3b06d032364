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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace kcpm {

/// Absolute instant, millisecond resolution, UTC.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;
using Duration = std::chrono::milliseconds;

/// Scalar attribute value. Nested XES attributes are flattened into these.
using AttributeValue = std::variant<std::string, std::int64_t, double, bool, Instant>;
using Attributes = std::map<std::string, AttributeValue>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line/column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input whose content violates a data contract.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters, mappings or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Time ----------------------------------------------------------------------

/// Parses ISO-8601 date-times: `YYYY-MM-DD[(T| )hh:mm[:ss[.fff]]][Z|(+|-)hh[:]mm]`.
/// A missing zone designator means UTC.
std::optional<Instant> parse_iso8601(std::string_view text);

/// Parses with a strptime(3) format. A trailing fractional-second part
/// (`.fff`) and a `Z` suffix after the formatted portion are accepted.
std::optional<Instant> parse_with_format(std::string_view text, const std::string& format);

/// `YYYY-MM-DDThh:mm:ss.fffZ`
std::string format_iso8601(Instant t);

// Attribute values ------------------------------------------------------------

/// Canonical text form used by the CSV writer.
std::string to_string(const AttributeValue& v);

/// Type inference used by the CSV reader: bool, integer, real, ISO instant,
/// otherwise string.
AttributeValue infer_scalar(std::string_view text);

std::string_view kind_name(const AttributeValue& v);

// Threads ---------------------------------------------------------------------

/// Process-wide cap on worker threads (>= 1).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls fn(i) for i in [0, n) across up to thread_count() workers. fn must
/// only write to per-index state; callers reduce afterwards in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::string trim(std::string_view s);

}  // namespace kcpm
