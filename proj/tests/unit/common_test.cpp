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


#include <gtest/gtest.h>

#include <atomic>
#include <vector>

#include "kcpm/common.hpp"

namespace kcpm {
namespace {

TEST(Iso8601, ParsesZonesAndFractions) {
  auto a = parse_iso8601("2014-10-22T11:15:41Z");
  auto b = parse_iso8601("2014-10-22T13:15:41+02:00");
  auto c = parse_iso8601("2014-10-22T11:15:41.250Z");
  ASSERT_TRUE(a && b && c);
  EXPECT_EQ(*a, *b);
  EXPECT_EQ((*c - *a).count(), 250);
  EXPECT_EQ(format_iso8601(*c), "2014-10-22T11:15:41.250Z");
}

TEST(Iso8601, RejectsGarbage) {
  EXPECT_FALSE(parse_iso8601("2014-13-01T00:00:00Z"));
  EXPECT_FALSE(parse_iso8601("yesterday"));
  EXPECT_FALSE(parse_iso8601("2014-10-22T11:15:41Zjunk"));
}

TEST(Iso8601, CustomFormat) {
  auto t = parse_with_format("22/10/2014 11:15:41", "%d/%m/%Y %H:%M:%S");
  ASSERT_TRUE(t);
  EXPECT_EQ(*t, *parse_iso8601("2014-10-22T11:15:41Z"));
  EXPECT_FALSE(parse_with_format("22-10-2014", "%d/%m/%Y"));
}

TEST(Scalars, InferKinds) {
  EXPECT_EQ(kind_name(infer_scalar("42")), "int");
  EXPECT_EQ(kind_name(infer_scalar("4.5")), "float");
  EXPECT_EQ(kind_name(infer_scalar("true")), "boolean");
  EXPECT_EQ(kind_name(infer_scalar("2014-10-22T11:15:41Z")), "date");
  EXPECT_EQ(kind_name(infer_scalar("65+")), "string");
  EXPECT_EQ(kind_name(infer_scalar("")), "string");
}

TEST(Scalars, RealsStayReal) {
  AttributeValue v = 3.0;
  EXPECT_EQ(to_string(v), "3.0");
  EXPECT_EQ(kind_name(infer_scalar(to_string(v))), "float");
}

TEST(Threads, ParallelForVisitsEveryIndexOnce) {
  for (unsigned n : {1u, 3u}) {
    set_thread_count(n);
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  set_thread_count(0);
  EXPECT_EQ(thread_count(), 1u);
}

TEST(Errors, ParseErrorCarriesPosition) {
  ParseError e("bad", 3, 7);
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 7u);
}

}  // namespace
}  // namespace kcpm
