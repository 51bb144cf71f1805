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
#include "core/exact_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <thread>

#include "core/error.hpp"
#include "core/graph_model.hpp"

namespace opl {
namespace {

using Mask = std::uint32_t;  // n <= kMaxExactVertices

constexpr Mask bit(int v) { return Mask{1} << v; }

// Directed reachability on out-neighbour masks.
inline bool reach(const Mask* out, int src, int dst) {
  Mask seen = bit(src);
  Mask frontier = seen;
  while (frontier) {
    const int v = std::countr_zero(frontier);
    frontier &= frontier - 1;
    const Mask fresh = out[v] & ~seen;
    if (fresh & bit(dst)) return true;
    seen |= fresh;
    frontier |= fresh;
  }
  return false;
}

BigInt from_u64(std::uint64_t x) { return BigInt(static_cast<unsigned long>(x)); }

BigInt power(unsigned long base, unsigned long exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
  return r;
}

void require_exact_n(int n) {
  if (n < 3 || n > kMaxExactVertices) {
    throw_parameter("exact computation needs 3 <= n <= " + std::to_string(kMaxExactVertices) +
                    ", got " + std::to_string(n));
  }
}

unsigned resolve_threads(unsigned threads) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  return threads;
}

struct Tally {
  std::vector<std::uint64_t> all, a, b, ab;
  explicit Tally(std::size_t m) : all(m + 1, 0), a(m + 1, 0), b(m + 1, 0), ab(m + 1, 0) {}
};

// Arc masks contributed by one edge in each of its three states.
struct EdgeArcs {
  int tail_fwd, head_fwd;  // Forward: tail_fwd -> head_fwd
};

}  // namespace

std::string budget_message(int n, std::uint64_t budget) {
  const std::size_t m = pair_count(n);
  return "n = " + std::to_string(n) + " needs 3^" + std::to_string(m) + " = " + to_string(power(3, m)) +
         " configurations, budget is " + std::to_string(budget);
}

void check_counts(const CountsTable& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kContract, "counts table: " + what); };
  if (c.n < 3) fail("n < 3");
  if (c.m != pair_count(c.n)) fail("m does not match n");
  if (c.a.size() != c.m + 1 || c.b.size() != c.m + 1 || c.ab.size() != c.m + 1) fail("wrong length");
  if (c.a[0] != 0 || c.b[0] != 0 || c.ab[0] != 0) fail("nonzero entry at k = 0");
  for (std::size_t k = 0; k <= c.m; ++k) {
    const BigInt cap = binomial(c.m, k) * power(2, k);
    if (c.ab[k] < 0 || c.ab[k] > c.a[k] || c.ab[k] > c.b[k] || c.a[k] > cap || c.b[k] > cap) {
      fail("entry bounds violated at k = " + std::to_string(k));
    }
  }
}

CountsTable enumerate_counts(int n, std::uint64_t budget, unsigned threads) {
  require_exact_n(n);
  const std::size_t m = pair_count(n);
  if (power(3, m) > from_u64(budget)) throw Error(ErrorKind::kBudget, budget_message(n, budget));

  std::vector<EdgeArcs> arcs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) arcs.push_back({i, j});
  }

  // Low digits (edges 0..r-1) are tabulated once; the high digits form an
  // outer mixed-radix counter split into contiguous chunks per worker.
  const std::size_t r = std::min<std::size_t>(m, 7);
  const std::size_t h = m - r;
  std::uint64_t low_size = 1;
  for (std::size_t e = 0; e < r; ++e) low_size *= 3;
  std::uint64_t high_size = 1;
  for (std::size_t e = 0; e < h; ++e) high_size *= 3;

  const auto nv = static_cast<std::size_t>(n);
  std::vector<Mask> low_masks(low_size * nv, 0);
  std::vector<std::uint8_t> low_k(low_size, 0);
  for (std::uint64_t index = 0; index < low_size; ++index) {
    std::uint64_t rest = index;
    for (std::size_t e = 0; e < r; ++e, rest /= 3) {
      const auto digit = rest % 3;
      if (digit == 0) continue;
      ++low_k[index];
      const auto [i, j] = arcs[e];
      if (digit == 1) {
        low_masks[index * nv + static_cast<std::size_t>(i)] |= bit(j);
      } else {
        low_masks[index * nv + static_cast<std::size_t>(j)] |= bit(i);
      }
    }
  }

  threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), high_size));
  std::vector<Tally> tallies(threads, Tally(m));

  auto worker = [&](unsigned t) {
    const std::uint64_t begin = high_size * t / threads;
    const std::uint64_t end = high_size * (t + 1) / threads;
    Tally& tally = tallies[t];

    std::vector<std::uint8_t> digits(h, 0);
    std::array<Mask, kMaxExactVertices> base{};
    std::size_t base_k = 0;
    auto apply = [&](std::size_t e, std::uint8_t digit) {  // toggles the arc of 'digit'
      const auto [i, j] = arcs[r + e];
      if (digit == 1) base[static_cast<std::size_t>(i)] ^= bit(j);
      if (digit == 2) base[static_cast<std::size_t>(j)] ^= bit(i);
    };
    std::uint64_t rest = begin;
    for (std::size_t e = 0; e < h; ++e, rest /= 3) {
      digits[e] = static_cast<std::uint8_t>(rest % 3);
      apply(e, digits[e]);
      if (digits[e]) ++base_k;
    }

    std::array<Mask, kMaxExactVertices> out{};
    for (std::uint64_t high = begin; high < end; ++high) {
      for (std::uint64_t low = 0; low < low_size; ++low) {
        const Mask* lm = &low_masks[low * nv];
        for (std::size_t v = 0; v < nv; ++v) out[v] = base[v] | lm[v];
        const std::size_t k = base_k + low_k[low];
        const bool a = reach(out.data(), kVertexA, kVertexS);
        const bool b = reach(out.data(), kVertexS, kVertexB);
        ++tally.all[k];
        tally.a[k] += a;
        tally.b[k] += b;
        tally.ab[k] += (a && b);
      }
      for (std::size_t e = 0; e < h; ++e) {
        apply(e, digits[e]);
        if (digits[e]) --base_k;
        digits[e] = static_cast<std::uint8_t>((digits[e] + 1) % 3);
        apply(e, digits[e]);
        if (digits[e]) ++base_k;
        if (digits[e] != 0) break;
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }

  CountsTable counts{n, m, std::vector<BigInt>(m + 1, 0), std::vector<BigInt>(m + 1, 0),
                     std::vector<BigInt>(m + 1, 0)};
  std::vector<BigInt> all(m + 1, 0);
  for (const auto& tally : tallies) {
    for (std::size_t k = 0; k <= m; ++k) {
      all[k] += from_u64(tally.all[k]);
      counts.a[k] += from_u64(tally.a[k]);
      counts.b[k] += from_u64(tally.b[k]);
      counts.ab[k] += from_u64(tally.ab[k]);
    }
  }
  for (std::size_t k = 0; k <= m; ++k) {
    if (all[k] != binomial(m, k) * power(2, k)) {
      throw Error(ErrorKind::kContract, "enumeration visited a wrong number of configurations");
    }
  }
  check_counts(counts);
  return counts;
}

EventProbabilities prob_from_counts(const CountsTable& counts, const Rational& p) {
  if (p < 0 || p > 1) throw_parameter("p must lie in [0, 1], got " + to_string(p));
  const Rational half_p = p / 2;
  const Rational q = 1 - p;
  EventProbabilities out{0, 0, 0};
  for (std::size_t k = 0; k <= counts.m; ++k) {
    const Rational w = pow(half_p, k) * pow(q, counts.m - k);
    out.a += counts.a[k] * w;
    out.b += counts.b[k] * w;
    out.ab += counts.ab[k] * w;
  }
  return out;
}

Rational cov_exact(int n, const Rational& p, std::uint64_t budget, unsigned threads) {
  if (p < 0 || p > 1) throw_parameter("p must lie in [0, 1], got " + to_string(p));
  return prob_from_counts(enumerate_counts(n, budget, threads), p).covariance();
}

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
  rebuild_integer_form();
}

void Polynomial::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
}

void Polynomial::rebuild_integer_form() {
  BigInt lcm = 1;
  for (const auto& c : coeffs_) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  integer_coeffs_.clear();
  for (const auto& c : coeffs_) integer_coeffs_.push_back(c.get_num() * (lcm / c.get_den()));
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int Polynomial::sign_at(const Rational& x) const {
  if (integer_coeffs_.empty()) return 0;
  // Homogenised Horner: sum_i C_i a^i d^(deg-i) with x = a/d, d > 0.
  const BigInt& a = x.get_num();
  const BigInt& d = x.get_den();
  BigInt acc = integer_coeffs_.back();
  BigInt dpow = 1;
  for (std::size_t i = integer_coeffs_.size() - 1; i-- > 0;) {
    dpow *= d;
    acc = acc * a + integer_coeffs_[i] * dpow;
  }
  return sgn(acc);
}

Polynomial operator+(const Polynomial& x, const Polynomial& y) {
  std::vector<Rational> c(std::max(x.coeffs_.size(), y.coeffs_.size()), 0);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i) c[i] += x.coeffs_[i];
  for (std::size_t i = 0; i < y.coeffs_.size(); ++i) c[i] += y.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& x, const Polynomial& y) {
  std::vector<Rational> c(std::max(x.coeffs_.size(), y.coeffs_.size()), 0);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i) c[i] += x.coeffs_[i];
  for (std::size_t i = 0; i < y.coeffs_.size(); ++i) c[i] -= y.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& x, const Polynomial& y) {
  if (x.coeffs_.empty() || y.coeffs_.empty()) return Polynomial();
  std::vector<Rational> c(x.coeffs_.size() + y.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
    if (x.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < y.coeffs_.size(); ++j) c[i + j] += x.coeffs_[i] * y.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial event_polynomial(const std::vector<BigInt>& counts, std::size_t m) {
  // sum_k N[k] 2^-k p^k (1-p)^(m-k), expanded binomially.
  std::vector<Rational> c(m + 1, 0);
  for (std::size_t k = 0; k <= m && k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    const Rational scale(counts[k], power(2, k));
    for (std::size_t t = 0; t + k <= m; ++t) {
      Rational term = scale * binomial(m - k, t);
      c[k + t] += (t % 2 == 0) ? term : Rational(-term);
    }
  }
  return Polynomial(std::move(c));
}

Polynomial cov_polynomial(const CountsTable& counts) {
  return event_polynomial(counts.ab, counts.m) - event_polynomial(counts.a, counts.m) * event_polynomial(counts.b, counts.m);
}

std::vector<RootBracket> find_critical_exact(const Polynomial& cov, const Rational& lo, const Rational& hi,
                                             const Rational& tol, unsigned grid) {
  if (!(lo >= 0 && lo < hi && hi <= 1)) throw_parameter("root interval must satisfy 0 <= lo < hi <= 1");
  if (tol <= 0) throw_parameter("tolerance must be positive");
  if (grid == 0) throw_parameter("grid must have at least one step");

  auto refine = [&](Rational l, Rational r, int sl) {
    while (r - l > tol) {
      Rational mid = (l + r) / 2;
      const int sm = cov.sign_at(mid);
      if (sm == sl) {
        l = mid;
        continue;
      }
      if (sm == -sl) {
        r = mid;
        continue;
      }
      // Exact zero at mid: step off it to nonzero neighbours.
      Rational w = std::min(Rational(tol / 2), Rational((r - l) / 4));
      while (cov.sign_at(mid - w) == 0 || cov.sign_at(mid + w) == 0) w /= 2;
      if (cov.sign_at(mid - w) != sl) {
        r = mid - w;
      } else if (cov.sign_at(mid + w) == -sl) {
        return RootBracket{mid - w, mid + w};
      } else {
        l = mid + w;
      }
    }
    return RootBracket{l, r};
  };

  std::vector<RootBracket> out;
  const Rational step = (hi - lo) / grid;
  Rational prev_x = lo;
  int prev_sign = 0;
  for (unsigned t = 0; t <= grid; ++t) {
    const Rational x = (t == grid) ? hi : Rational(lo + step * t);
    const int s = cov.sign_at(x);
    if (s == 0) continue;
    if (prev_sign != 0 && s != prev_sign) out.push_back(refine(prev_x, x, prev_sign));
    prev_x = x;
    prev_sign = s;
  }
  return out;
}

Rational percolation_prob(int n, const Rational& q, int u, int v, std::uint64_t budget) {
  require_exact_n(n);
  if (q < 0 || q > 1) throw_parameter("q must lie in [0, 1], got " + to_string(q));
  if (u < 0 || v < 0 || u >= n || v >= n) throw_parameter("vertex id out of range");
  if (u == v) return 1;
  const std::size_t m = pair_count(n);
  if (power(2, m) > from_u64(budget)) {
    throw Error(ErrorKind::kBudget, "n = " + std::to_string(n) + " needs 2^" + std::to_string(m) +
                                        " edge subsets, budget is " + std::to_string(budget));
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<std::uint64_t> connected(m + 1, 0);
  std::array<Mask, kMaxExactVertices> nbr{};
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << m); ++subset) {
    nbr.fill(0);
    for (std::size_t e = 0; e < m; ++e) {
      if ((subset >> e) & 1U) {
        const auto [i, j] = pairs[e];
        nbr[static_cast<std::size_t>(i)] |= bit(j);
        nbr[static_cast<std::size_t>(j)] |= bit(i);
      }
    }
    if (reach(nbr.data(), u, v)) ++connected[static_cast<std::size_t>(std::popcount(subset))];
  }
  Rational out = 0;
  for (std::size_t k = 0; k <= m; ++k) {
    out += from_u64(connected[k]) * pow(q, k) * pow(Rational(1 - q), m - k);
  }
  return out;
}

}  // namespace opl
