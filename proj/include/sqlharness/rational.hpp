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

#ifndef SQLHARNESS_RATIONAL_HPP_
#define SQLHARNESS_RATIONAL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sqlharness {

// Every rate in the harness is an exact rational; rounding happens only when
// a value is rendered.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// A rate whose denominator may be zero. nullopt means "not applicable".
using MaybeRational = std::optional<Rational>;

inline Rational ratio(std::int64_t num, std::int64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

inline MaybeRational ratio_or_na(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return ratio(num, den);
}

// "3/5", "-1/2", "7".
std::string to_string(const Rational& r);

// Accepts the output of to_string.
Rational parse_rational(std::string_view text);

// Accepts decimal text such as "0.0001", "-2.5", "1e-07", "3/8".
Rational parse_decimal(std::string_view text);

// Rounds half-to-even to `places` decimal digits and formats with exactly
// that many digits after the point.
std::string round_half_even(const Rational& r, int places);

double to_double(const Rational& r);

}  // namespace sqlharness

#endif  // SQLHARNESS_RATIONAL_HPP_
