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
#include <optional>
#include <string>
#include <vector>

#include "core/rational.hpp"

namespace opl {

// Enumeration budgets, counted in configurations (3^m for the oriented model,
// 2^m for undirected percolation).
inline constexpr std::uint64_t kDefaultBudget = 14348907ULL;      // 3^15, n <= 6
inline constexpr std::uint64_t kDeepBudget = 10460353203ULL;      // 3^21, n = 7

// Census of oriented configurations of K_n by number of present edges k.
struct CountsTable {
  int n = 0;
  std::size_t m = 0;
  std::vector<BigInt> a;   // configurations with a -> s
  std::vector<BigInt> b;   // configurations with s -> b
  std::vector<BigInt> ab;  // both

  friend bool operator==(const CountsTable&, const CountsTable&) = default;
};

// Throws kContract if any structural invariant of the table fails.
void check_counts(const CountsTable& counts);

// Exhaustive enumeration of all 3^m configurations, split over 'threads'
// workers. Throws kBudget if 3^m exceeds 'budget'.
CountsTable enumerate_counts(int n, std::uint64_t budget = kDefaultBudget, unsigned threads = 0);

struct EventProbabilities {
  Rational a, b, ab;
  Rational covariance() const { return ab - a * b; }
};

EventProbabilities prob_from_counts(const CountsTable& counts, const Rational& p);
Rational cov_exact(int n, const Rational& p, std::uint64_t budget = kDefaultBudget, unsigned threads = 0);

// Dense polynomial in p with exact coefficients, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  Rational operator()(const Rational& x) const;
  // Sign of the value at x without forming the rational value.
  int sign_at(const Rational& x) const;

  friend Polynomial operator+(const Polynomial&, const Polynomial&);
  friend Polynomial operator-(const Polynomial&, const Polynomial&);
  friend Polynomial operator*(const Polynomial&, const Polynomial&);

 private:
  void trim();
  void rebuild_integer_form();

  std::vector<Rational> coeffs_;
  std::vector<BigInt> integer_coeffs_;  // coeffs_ scaled by a positive common denominator
};

// Cov(p) = P_AB(p) - P_A(p) P_B(p) as a polynomial of degree <= 2m.
Polynomial cov_polynomial(const CountsTable& counts);
Polynomial event_polynomial(const std::vector<BigInt>& counts, std::size_t m);

struct RootBracket {
  Rational lo, hi;  // sign(cov(lo)) == -sign(cov(hi)) != 0, hi - lo <= tol
};

// Sign scan on 'grid' equal steps of [lo, hi], then exact bisection of every
// strict sign change down to width tol. Zeros of even multiplicity produce
// no sign change and are not reported.
std::vector<RootBracket> find_critical_exact(const Polynomial& cov, const Rational& lo, const Rational& hi,
                                             const Rational& tol, unsigned grid = 10000);

// Undirected percolation on K_n with edge probability q: P(u <-> v).
// Enumerates 2^m edge subsets; throws kBudget past 'budget'.
Rational percolation_prob(int n, const Rational& q, int u, int v, std::uint64_t budget = kDefaultBudget);

// Required budget phrased as "3^m = value" for refusal messages.
std::string budget_message(int n, std::uint64_t budget);

}  // namespace opl
