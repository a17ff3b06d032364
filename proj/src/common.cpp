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

#include "kcpm/common.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <thread>
#include <vector>

namespace kcpm {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(line == 0 ? what
                      : what + " (line " + std::to_string(line) +
                            (column ? ", column " + std::to_string(column) : std::string()) + ")"),
      line_(line),
      column_(column) {}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

namespace {

bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < count; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  pos += count;
  return true;
}

std::optional<Instant> make_instant(int y, int mo, int d, int h, int mi, int s, int ms) {
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return Instant{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} + seconds{s} +
                 milliseconds{ms}};
}

// Reads `.fff...` (any number of digits, truncated to ms). Returns false on a
// dangling dot.
bool read_fraction(std::string_view s, std::size_t& pos, int& ms) {
  ms = 0;
  if (pos >= s.size() || s[pos] != '.') return true;
  ++pos;
  std::size_t start = pos;
  int scale = 100;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    if (scale > 0) {
      ms += (s[pos] - '0') * scale;
      scale /= 10;
    }
    ++pos;
  }
  return pos > start;
}

// Reads `Z`, `+hh:mm`, `+hhmm`, `+hh` or nothing. Offset in minutes east of UTC.
bool read_zone(std::string_view s, std::size_t& pos, int& offset_minutes) {
  offset_minutes = 0;
  if (pos == s.size()) return true;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
    return true;
  }
  if (s[pos] != '+' && s[pos] != '-') return false;
  int sign = s[pos] == '-' ? -1 : 1;
  ++pos;
  int hh = 0, mm = 0;
  if (!read_digits(s, pos, 2, hh)) return false;
  if (pos < s.size() && s[pos] == ':') ++pos;
  if (pos < s.size() && !read_digits(s, pos, 2, mm)) return false;
  offset_minutes = sign * (hh * 60 + mm);
  return true;
}

}  // namespace

std::optional<Instant> parse_iso8601(std::string_view raw) {
  std::string text = trim(raw);
  std::string_view s = text;
  std::size_t pos = 0;
  int y, mo, d, h = 0, mi = 0, sec = 0, ms = 0;
  if (!read_digits(s, pos, 4, y) || pos >= s.size() || s[pos++] != '-' ||
      !read_digits(s, pos, 2, mo) || pos >= s.size() || s[pos++] != '-' ||
      !read_digits(s, pos, 2, d))
    return std::nullopt;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == 't' || s[pos] == ' ')) {
    ++pos;
    if (!read_digits(s, pos, 2, h) || pos >= s.size() || s[pos++] != ':' ||
        !read_digits(s, pos, 2, mi))
      return std::nullopt;
    if (pos < s.size() && s[pos] == ':') {
      ++pos;
      if (!read_digits(s, pos, 2, sec)) return std::nullopt;
      if (!read_fraction(s, pos, ms)) return std::nullopt;
    }
  }
  int offset = 0;
  if (!read_zone(s, pos, offset) || pos != s.size()) return std::nullopt;
  auto t = make_instant(y, mo, d, h, mi, sec, ms);
  if (!t) return std::nullopt;
  return *t - std::chrono::minutes{offset};
}

std::optional<Instant> parse_with_format(std::string_view raw, const std::string& format) {
  if (format.empty() || format == "iso8601") return parse_iso8601(raw);
  std::string text = trim(raw);
  std::tm tm{};
  const char* end = ::strptime(text.c_str(), format.c_str(), &tm);
  if (end == nullptr) return std::nullopt;
  std::string_view rest(end);
  std::size_t pos = 0;
  int ms = 0, offset = 0;
  if (!read_fraction(rest, pos, ms) || !read_zone(rest, pos, offset) || pos != rest.size())
    return std::nullopt;
  auto t = make_instant(tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min,
                        tm.tm_sec, ms);
  if (!t) return std::nullopt;
  return *t - std::chrono::minutes{offset};
}

std::string format_iso8601(Instant t) {
  using namespace std::chrono;
  auto day = floor<days>(t);
  year_month_day ymd{day};
  auto tod = t - day;
  auto h = duration_cast<hours>(tod);
  auto mi = duration_cast<minutes>(tod - h);
  auto s = duration_cast<seconds>(tod - h - mi);
  auto ms = duration_cast<milliseconds>(tod - h - mi - s);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(h.count()), int(mi.count()),
                int(s.count()), int(ms.count()));
  return buf;
}

std::string to_string(const AttributeValue& v) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(Instant t) const { return format_iso8601(t); }
    std::string operator()(double d) const {
      if (!std::isfinite(d)) return std::isnan(d) ? "nan" : (d > 0 ? "inf" : "-inf");
      char buf[64];
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
      std::string s(buf, p);
      // Keep reals distinguishable from integers on re-read.
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      return s;
    }
  };
  return std::visit(Visitor{}, v);
}

AttributeValue infer_scalar(std::string_view raw) {
  std::string_view s = raw;
  if (s == "true") return true;
  if (s == "false") return false;
  if (!s.empty()) {
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ec == std::errc() && p == s.data() + s.size()) return i;
    if (s.find_first_of(".eE") != std::string_view::npos ||
        s == "nan" || s == "inf" || s == "-inf") {
      double d = 0;
      auto [q, ec2] = std::from_chars(s.data(), s.data() + s.size(), d);
      if (ec2 == std::errc() && q == s.data() + s.size()) return d;
    }
    if (s.size() >= 10 && std::isdigit(static_cast<unsigned char>(s[0])) && s[4] == '-')
      if (auto t = parse_iso8601(s)) return *t;
  }
  return std::string(raw);
}

std::string_view kind_name(const AttributeValue& v) {
  static constexpr std::string_view names[] = {"string", "int", "float", "boolean", "date"};
  return names[v.index()];
}

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_thread_count(unsigned n) { g_threads = std::max(1u, n); }
unsigned thread_count() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace kcpm
