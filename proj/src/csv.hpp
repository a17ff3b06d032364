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

// RFC-4180 records. Internal to the library.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kcpm::csv {

struct Field {
  std::string text;
  bool quoted = false;
};

class Reader {
 public:
  explicit Reader(std::istream& in, char delimiter = ',');

  /// Reads the next record. Returns false at end of input. Blank lines are
  /// skipped. Throws ParseError on an unterminated quote.
  bool next(std::vector<Field>& record);

  /// Line on which the last returned record started (1-based).
  std::size_t line() const noexcept { return record_line_; }

 private:
  int get();
  std::istream& in_;
  char delim_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

/// Quotes when the text contains the delimiter, a quote, CR/LF, or when
/// `force` is set.
std::string escape(std::string_view text, bool force = false, char delimiter = ',');

void write_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace kcpm::csv
