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

// Small non-validating XML reader, enough for XES. Internal to the library.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kcpm::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::size_t line = 0;
  std::size_t column = 0;

  /// nullptr when absent.
  const std::string* attribute(std::string_view key) const;
};

/// Parses a whole document and returns its root element. Character data is
/// dropped. Throws ParseError with line and column on malformed input.
Element parse(std::istream& in);

std::string escape(std::string_view text);

}  // namespace kcpm::xml
