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
#include "core/asymptotics.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/rational.hpp"

namespace opl::asymptotics {
namespace {

void require_subcritical(double c, const char* what) {
  if (!(c >= 0.0 && c < 1.0)) throw_parameter(std::string(what) + " requires 0 <= c < 1, got " + std::to_string(c));
}

double quartic_derivative(double c) { return ((-4.0 * c + 15.0) * c - 18.0) * c + 7.0; }

double bisect(double lo, double hi) {
  double flo = quartic(lo);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = quartic(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double c = 0.5 * (lo + hi);
  for (int step = 0; step < 2; ++step) c -= quartic(c) / quartic_derivative(c);
  return c;
}

// Truncated product of polynomial factors in c, degrees 0..max_degree.
std::vector<double> multiply(const std::vector<double>& x, const std::vector<double>& y, std::size_t max_degree) {
  std::vector<double> out(max_degree + 1, 0.0);
  for (std::size_t i = 0; i < x.size() && i <= max_degree; ++i) {
    for (std::size_t j = 0; j < y.size() && i + j <= max_degree; ++j) out[i + j] += x[i] * y[j];
  }
  return out;
}

double evaluate(const std::vector<double>& coeffs, double c) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * c + *it;
  return acc;
}

}  // namespace

double quartic(double c) { return (((-c + 5.0) * c - 9.0) * c + 7.0) * c - 1.0; }

double quartic_factored(double c) {
  const double u = 1.0 - c;
  return 1.0 - (2.0 - c) * u * u * u;
}

std::vector<std::int64_t> quartic_coefficients() { return {-1, 7, -9, 5, -1}; }

std::int64_t discriminant(const std::vector<std::int64_t>& f) {
  const std::size_t deg = f.size() - 1;
  if (f.size() < 2 || f.back() == 0) throw_parameter("discriminant needs a polynomial of degree >= 1");
  std::vector<std::int64_t> df;
  for (std::size_t i = 1; i <= deg; ++i) df.push_back(static_cast<std::int64_t>(i) * f[i]);

  // Sylvester matrix of f (degree d) and f' (degree d-1), size 2d-1.
  const std::size_t size = 2 * deg - 1;
  std::vector<std::vector<BigInt>> s(size, std::vector<BigInt>(size, 0));
  for (std::size_t row = 0; row + 1 < deg; ++row) {  // d-1 rows of f
    for (std::size_t t = 0; t <= deg; ++t) s[row][row + t] = static_cast<long>(f[deg - t]);
  }
  for (std::size_t row = 0; row < deg; ++row) {  // d rows of f'
    for (std::size_t t = 0; t < deg; ++t) s[deg - 1 + row][row + t] = static_cast<long>(df[deg - 1 - t]);
  }

  // Fraction-free Bareiss elimination.
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (s[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < size && s[swap][k] == 0) ++swap;
      if (swap == size) return 0;
      std::swap(s[k], s[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) s[i][j] = (s[i][j] * s[k][k] - s[i][k] * s[k][j]) / prev;
    }
    prev = s[k][k];
  }
  BigInt resultant = sign * s[size - 1][size - 1];
  // disc = (-1)^(d(d-1)/2) * Res(f, f') / lead(f)
  BigInt disc = resultant / BigInt(static_cast<long>(f.back()));
  if ((deg * (deg - 1) / 2) % 2 == 1) disc = -disc;
  if (!disc.fits_slong_p()) throw_parameter("discriminant overflows 64 bits");
  return disc.get_si();
}

CriticalConstants find_c_roots(double tol) {
  if (!(tol > 0.0)) throw_parameter("tolerance must be positive");
  CriticalConstants out{bisect(0.0, 1.0), bisect(2.0, 3.0)};
  if (!(std::fabs(quartic(out.c1)) < tol) || !(std::fabs(quartic(out.c2)) < tol)) {
    throw_parameter("tolerance below attainable double precision");
  }
  return out;
}

double leading_factor(double c) {
  require_subcritical(c, "leading_factor");
  const double u = 1.0 - c;
  return quartic(c) * c * c * c / (u * u * u * u * u);
}

AsymptoticResult main_formula(double c, int n) {
  require_subcritical(c, "main_formula");
  if (n < 1) throw_parameter("n must be positive");
  // extended precision so each term is close to correctly rounded; near c1
  // the two terms nearly cancel
  using X = long double;
  const X cx = c;
  const X n3 = static_cast<X>(n) * n * n;
  const X u = 1.0L - cx;
  const X c3 = cx * cx * cx;
  const X u5 = u * u * u * u * u;
  const X q = (((-cx + 5.0L) * cx - 9.0L) * cx + 7.0L) * cx - 1.0L;
  AsymptoticResult r;
  r.c = c;
  r.n = n;
  r.value = static_cast<double>(q * c3 / (u5 * n3));
  r.type1 = static_cast<double>(-(2.0L * c3 - c3 * cx) / (u * u * n3));
  r.type2 = static_cast<double>(c3 / (u5 * n3));
  return r;
}

SeriesSums truncated_series(double c, int N) {
  require_subcritical(c, "truncated_series");
  if (N < 1) throw_parameter("term bound N must be at least 1");
  const auto degree = static_cast<std::size_t>(N) + 2;
  std::vector<double> from0(degree + 1, 1.0);  // sum_{i>=0} c^i
  std::vector<double> from1(degree + 1, 1.0);  // sum_{k>=1} c^k
  from1[0] = 0.0;
  const std::vector<double> c2{0.0, 0.0, 1.0};

  // Type 1: 2 sum_{j>=1} c^(j+2) + sum_{i,j>=1} c^(i+j+2).
  std::vector<double> single = multiply(from1, c2, degree);
  std::vector<double> dbl = multiply(multiply(from1, from1, degree), c2, degree);
  std::vector<double> type1(degree + 1, 0.0);
  for (std::size_t d = 0; d <= degree; ++d) type1[d] = 2.0 * single[d] + dbl[d];

  // Type 2: (sum_{i>=0} c^i)^2 (sum_{k>=1} c^k)^3.
  std::vector<double> type2 = multiply(from0, from0, degree);
  for (int f = 0; f < 3; ++f) type2 = multiply(type2, from1, degree);

  return {evaluate(type1, c), evaluate(type2, c)};
}

SeriesSums series_limits(double c) {
  require_subcritical(c, "series_limits");
  const double u = 1.0 - c;
  const double c3 = c * c * c;
  return {(2.0 * c3 - c3 * c) / (u * u), c3 / (u * u * u * u * u)};
}

}  // namespace opl::asymptotics
