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

#include "csv.hpp"

#include <istream>
#include <ostream>

#include "kcpm/common.hpp"

namespace kcpm::csv {

Reader::Reader(std::istream& in, char delimiter) : in_(in), delim_(delimiter) {
  // UTF-8 byte order mark
  if (in_.peek() == 0xEF) {
    char bom[3];
    in_.read(bom, 3);
    if (!(static_cast<unsigned char>(bom[1]) == 0xBB && static_cast<unsigned char>(bom[2]) == 0xBF)) {
      in_.clear();
      in_.seekg(0);
    }
  }
}

int Reader::get() {
  int c = in_.get();
  if (c == '\n') ++line_;
  return c;
}

bool Reader::next(std::vector<Field>& record) {
  for (;;) {
    record.clear();
    if (in_.peek() == std::char_traits<char>::eof()) return false;
    record_line_ = line_;
    Field field;
    bool any = false;
    for (;;) {
      int c = get();
      if (c == std::char_traits<char>::eof() || c == '\n') {
        record.push_back(std::move(field));
        break;
      }
      if (c == '\r') {
        if (in_.peek() == '\n') continue;
        record.push_back(std::move(field));
        break;
      }
      any = true;
      if (c == '"' && field.text.empty() && !field.quoted) {
        field.quoted = true;
        std::size_t start_line = line_;
        for (;;) {
          int q = get();
          if (q == std::char_traits<char>::eof())
            throw ParseError("unterminated quoted field", start_line);
          if (q == '"') {
            if (in_.peek() == '"') {
              get();
              field.text.push_back('"');
              continue;
            }
            break;
          }
          field.text.push_back(static_cast<char>(q));
        }
        continue;
      }
      if (c == delim_) {
        record.push_back(std::move(field));
        field = Field{};
        continue;
      }
      field.text.push_back(static_cast<char>(c));
    }
    if (!any) continue;
    return true;
  }
}

std::string escape(std::string_view text, bool force, char delimiter) {
  bool needs = force || text.find_first_of("\"\r\n") != std::string_view::npos ||
               text.find(delimiter) != std::string_view::npos;
  if (!needs) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace kcpm::csv
