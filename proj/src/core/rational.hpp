// Copyright 2026 The opl Authors
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

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace opl {

using BigInt = mpz_class;
using Rational = mpq_class;

// Parses "a/b", an integer, or a decimal literal ("0.25", "-1.5e-3") into an
// exact rational. Decimals are converted without rounding.
Rational parse_rational(std::string_view text);

// Lossless "numerator/denominator" form; integers print as "k/1".
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

Rational pow(const Rational& base, unsigned long exponent);

// Falling factorial (x)_k = x (x-1) ... (x-k+1); (x)_0 = 1.
BigInt falling_factorial(long x, unsigned long k);
BigInt binomial(unsigned long n, unsigned long k);

// floor(q * 2^bits) for q in [0, 1]; used to turn probabilities into integer
// thresholds for a uniform generator word.
std::uint64_t scaled_threshold(const Rational& q, unsigned bits);

}  // namespace opl
