// Copyright 2026 The sqlharness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "sqlharness/rational.hpp"

namespace sqlharness {
namespace {

TEST(Rational, ToStringAndParseRoundTrip) {
  EXPECT_EQ(to_string(Rational(3, 5)), "3/5");
  EXPECT_EQ(to_string(Rational(-1, 2)), "-1/2");
  EXPECT_EQ(to_string(Rational(7)), "7");
  for (const auto& r : {Rational(3, 5), Rational(-22, 7), Rational(0), Rational(123456789, 1000)}) {
    EXPECT_EQ(parse_rational(to_string(r)), r);
  }
}

TEST(Rational, ParseRejectsGarbage) {
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_decimal(""), std::invalid_argument);
}

TEST(Rational, ParseDecimalIsExact) {
  EXPECT_EQ(parse_decimal("0.0001"), Rational(1, 10000));
  EXPECT_EQ(parse_decimal("-2.5"), Rational(-5, 2));
  EXPECT_EQ(parse_decimal("1e-07"), Rational(1, 10000000));
  EXPECT_EQ(parse_decimal("2.5E3"), Rational(2500));
  EXPECT_EQ(parse_decimal("3/8"), Rational(3, 8));
  EXPECT_EQ(parse_decimal("0.6"), Rational(3, 5));
}

TEST(Rational, RoundHalfEven) {
  EXPECT_EQ(round_half_even(Rational(1, 8), 2), "0.12");    // 0.125 -> even
  EXPECT_EQ(round_half_even(Rational(3, 8), 2), "0.38");    // 0.375 -> even
  EXPECT_EQ(round_half_even(Rational(5, 2), 0), "2");
  EXPECT_EQ(round_half_even(Rational(7, 2), 0), "4");
  EXPECT_EQ(round_half_even(Rational(2, 3) * 100, 2), "66.67");
  EXPECT_EQ(round_half_even(Rational(-1, 8), 2), "-0.12");
  EXPECT_EQ(round_half_even(Rational(-1, 1000), 2), "0.00");
  EXPECT_EQ(round_half_even(Rational(23, 100), 4), "0.2300");
  EXPECT_EQ(round_half_even(Rational(60), 2), "60.00");
}

}  // namespace
}  // namespace sqlharness
