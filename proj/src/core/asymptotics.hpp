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

#include <cstdint>
#include <vector>

namespace opl::asymptotics {

// 1 - (2 - c)(1 - c)^3 in expanded form -c^4 + 5c^3 - 9c^2 + 7c - 1.
double quartic(double c);
// Same polynomial evaluated from the factored form.
double quartic_factored(double c);

// Integer coefficients of the quartic, lowest degree first.
std::vector<std::int64_t> quartic_coefficients();

// Discriminant of an integer polynomial (coefficients lowest first) from the
// Sylvester resultant of f and f'; exact integer arithmetic.
std::int64_t discriminant(const std::vector<std::int64_t>& coefficients);

struct CriticalConstants {
  double c1;  // root in (0, 1)
  double c2;  // root in (2, 3)
};

// Bisection on (0, 1) and (2, 3) to 1e-12, then two Newton steps. Roots
// satisfy |quartic(c)| < tol; throws kParameter if tol <= 0 or unattainable.
CriticalConstants find_c_roots(double tol = 1e-12);

struct AsymptoticResult {
  double c = 0;
  int n = 0;
  double value = 0;  // leading n^-3 term of the covariance at p = 2c/n
  double type1 = 0;  // -(2c^3 - c^4) / ((1-c)^2 n^3)
  double type2 = 0;  // c^3 / ((1-c)^5 n^3)
};

// Requires 0 <= c < 1 and n >= 1.
AsymptoticResult main_formula(double c, int n);

// n^3 * value, i.e. the c-dependent factor of the leading term.
double leading_factor(double c);

struct SeriesSums {
  double type1;
  double type2;
};

// Partial sums of the two pair series keeping every term of total degree
// <= N + 2 in c: type1 = sum_{i+j>=1} c^(i+j+2), type2 = sum c^(i+j+k+l+m)
// over i, j >= 0 and k, l, m >= 1. Both are built by multiplying truncated
// geometric factors. Requires 0 <= c < 1 and N >= 1.
SeriesSums truncated_series(double c, int N);

// Closed-form limits of truncated_series as N grows.
SeriesSums series_limits(double c);

}  // namespace opl::asymptotics
