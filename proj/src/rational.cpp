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

#include "sqlharness/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace sqlharness {

namespace {

BigInt parse_int(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw std::invalid_argument("bad integer: " + std::string(text));
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw std::invalid_argument("bad integer: " + std::string(text));
    }
    value = value * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-value) : value;
}

BigInt pow10(int n) {
  BigInt p = 1;
  for (int i = 0; i < n; ++i) p *= 10;
  return p;
}

}  // namespace

std::string to_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  return Rational(parse_int(text.substr(0, slash)), den);
}

Rational parse_decimal(std::string_view text) {
  if (text.find('/') != std::string_view::npos) return parse_rational(text);
  std::string_view mantissa = text;
  int exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    exponent = static_cast<int>(parse_int(text.substr(e + 1)));
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("bad decimal: " + std::string(text));
      seen_point = true;
    } else {
      digits.push_back(c);
      if (seen_point && std::isdigit(static_cast<unsigned char>(c))) ++frac_digits;
    }
  }
  if (digits.empty() || digits == "-" || digits == "+") {
    throw std::invalid_argument("bad decimal: " + std::string(text));
  }
  Rational value(parse_int(digits));
  int scale = exponent - frac_digits;
  if (scale >= 0) {
    value *= Rational(pow10(scale));
  } else {
    value /= Rational(pow10(-scale));
  }
  return value;
}

std::string round_half_even(const Rational& r, int places) {
  const BigInt scale = pow10(places);
  const bool negative = r < 0;
  Rational scaled = (negative ? Rational(-r) : r) * Rational(scale);
  BigInt num = boost::multiprecision::numerator(scaled);
  BigInt den = boost::multiprecision::denominator(scaled);
  BigInt whole = num / den;
  BigInt rem = num % den;
  BigInt twice = rem * 2;
  if (twice > den || (twice == den && (whole % 2) == 1)) whole += 1;

  std::string digits = whole.str();
  if (places > 0) {
    if (static_cast<int>(digits.size()) <= places) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (negative && whole != 0) digits.insert(0, "-");
  return digits;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace sqlharness
