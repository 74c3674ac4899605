// Copyright 2026 The cpayoff Authors
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

#include "cpayoff/rational.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <system_error>

#include "cpayoff/error.h"

namespace cpayoff {
namespace {

using boost::multiprecision::cpp_int;

cpp_int ParseInteger(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw Error(ErrorCode::kParseError,
                "malformed number '" + std::string(whole) + "'");
  }
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kParseError,
                  "malformed number '" + std::string(whole) + "'");
    }
  }
  // A leading zero would select octal.
  const size_t first = std::min(digits.find_first_not_of('0'), digits.size() - 1);
  return cpp_int(std::string(digits.substr(first)));
}

cpp_int PowerOfTen(long exponent) {
  cpp_int result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

Rational ParseDecimal(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(exp_text.data(),
                                     exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() ||
        exponent > 4000) {
      throw Error(ErrorCode::kParseError,
                  "malformed exponent in '" + std::string(whole) + "'");
    }
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    digits = std::string(text.substr(0, dot)) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
    if (digits.empty()) digits = "x";  // forces a parse error for "."
  } else {
    digits = std::string(text);
  }
  cpp_int mantissa = ParseInteger(digits, whole);
  Rational result = exponent >= 0 ? Rational(mantissa * PowerOfTen(exponent))
                                  : Rational(mantissa, PowerOfTen(-exponent));
  return negative ? Rational(-result) : result;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::kParseError, "empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = ParseDecimal(text.substr(0, slash), text);
    Rational den = ParseDecimal(text.substr(slash + 1), text);
    if (den == 0) {
      throw Error(ErrorCode::kParseError,
                  "zero denominator in '" + std::string(text) + "'");
    }
    return num / den;
  }
  return ParseDecimal(text, text);
}

Rational RationalFromDouble(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kParseError, "non-finite number");
  }
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error(ErrorCode::kParseError, "number too long");
  return ParseRational(std::string_view(buffer, ptr - buffer));
}

double ToDouble(const Rational& value) { return value.convert_to<double>(); }

std::string FormatRational(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

}  // namespace cpayoff
