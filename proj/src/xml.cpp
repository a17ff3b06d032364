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

#include "xml.hpp"

#include <cctype>
#include <cstdint>
#include <istream>
#include <iterator>

#include "kcpm/common.hpp"

namespace kcpm::xml {

const std::string* Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

namespace {

bool is_name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return is_name_start(c) || std::isdigit(u) || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  explicit Parser(std::string text) : s_(std::move(text)) {}

  Element document() {
    skip_misc();
    if (eof()) fail("no root element");
    if (peek() != '<') fail("expected '<'");
    Element root = element();
    skip_misc();
    if (!eof()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("XML: " + what, line_, col_); }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  bool starts_with(std::string_view p) const { return s_.compare(pos_, p.size(), p) == 0; }

  char advance() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) advance();
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_until(std::string_view terminator, const char* what) {
    while (!eof() && !starts_with(terminator)) advance();
    if (eof()) fail(std::string("unterminated ") + what);
    advance(terminator.size());
  }

  // Prolog, comments, processing instructions, doctype and whitespace.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<!DOCTYPE")) {
        int depth = 0;
        while (!eof()) {
          char c = advance();
          if (c == '[') ++depth;
          if (c == ']') --depth;
          if (c == '>' && depth <= 0) break;
        }
      } else {
        return;
      }
    }
  }

  std::string name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) advance();
    return s_.substr(start, pos_ - start);
  }

  void entity(std::string& out) {
    std::size_t start = pos_;
    advance();  // '&'
    std::size_t semi = s_.find(';', pos_);
    if (semi == std::string::npos || semi - pos_ > 10) fail("malformed entity reference");
    std::string ref = s_.substr(pos_, semi - pos_);
    if (ref == "lt") out += '<';
    else if (ref == "gt") out += '>';
    else if (ref == "amp") out += '&';
    else if (ref == "quot") out += '"';
    else if (ref == "apos") out += '\'';
    else if (!ref.empty() && ref[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
      std::size_t i = hex ? 2 : 1;
      if (i >= ref.size()) fail("empty character reference");
      for (; i < ref.size(); ++i) {
        char c = ref[i];
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else fail("bad character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      pos_ = start;
      fail("unknown entity '&" + ref + ";'");
    }
    advance(semi - pos_ + 1);
  }

  std::string attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    char quote = advance();
    std::string out;
    while (!eof() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      if (peek() == '&') {
        entity(out);
        continue;
      }
      out += advance();
    }
    if (eof()) fail("unterminated attribute value");
    advance();
    return out;
  }

  Element element() {
    Element el;
    el.line = line_;
    el.column = col_;
    advance();  // '<'
    el.name = name();
    for (;;) {
      bool had_ws = !eof() && std::isspace(static_cast<unsigned char>(peek()));
      skip_ws();
      if (eof()) fail("unterminated start tag <" + el.name + ">");
      if (starts_with("/>")) {
        advance(2);
        return el;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (!had_ws) fail("expected whitespace before attribute");
      std::string key = name();
      skip_ws();
      if (eof() || peek() != '=') fail("expected '=' after attribute " + key);
      advance();
      skip_ws();
      std::string value = attribute_value();
      for (const auto& [k, v] : el.attributes)
        if (k == key) fail("duplicate attribute " + key);
      el.attributes.emplace_back(std::move(key), std::move(value));
    }
    // Content.
    for (;;) {
      if (eof()) fail("missing end tag </" + el.name + ">");
      if (starts_with("</")) {
        advance(2);
        std::string closing = name();
        if (closing != el.name)
          fail("mismatched end tag </" + closing + ">, expected </" + el.name + ">");
        skip_ws();
        if (eof() || peek() != '>') fail("expected '>'");
        advance();
        return el;
      }
      if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<![CDATA[")) {
        skip_until("]]>", "CDATA section");
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (peek() == '<') {
        el.children.push_back(element());
      } else if (peek() == '&') {
        std::string sink;
        entity(sink);
      } else {
        advance();
      }
    }
  }

  std::string s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

Element parse(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
  return Parser(std::move(text)).document();
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace kcpm::xml
