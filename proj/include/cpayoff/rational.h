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

#ifndef CPAYOFF_RATIONAL_H_
#define CPAYOFF_RATIONAL_H_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cpayoff {

using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q", integers, and decimal literals ("0.125", "-3e-2") exactly.
// Throws Error(kParseError) on malformed input or a zero denominator.
Rational ParseRational(std::string_view text);

// Exact rational equal to the shortest decimal that round-trips `value`, so
// that 0.1 becomes 1/10 rather than the binary fraction nearest to it.
Rational RationalFromDouble(double value);

double ToDouble(const Rational& value);

// "p/q", or "p" when the denominator is one.
std::string FormatRational(const Rational& value);

}  // namespace cpayoff

#endif  // CPAYOFF_RATIONAL_H_
