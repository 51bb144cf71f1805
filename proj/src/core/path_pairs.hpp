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

#include <array>
#include <map>
#include <string>
#include <vector>

#include "core/graph_model.hpp"
#include "core/rational.hpp"

namespace opl {

// Largest n for which path lists are materialised.
inline constexpr int kDefaultPathGuard = 12;

// Maximum path length considered in truncated path counts.
struct CutOff {
  int length = 1;

  explicit CutOff(int L);
  // ceil((ln n)^2), at least 1.
  static CutOff default_for(int n);
};

// Number of self-avoiding u -> v paths of length <= L in K_n:
// sum over l of (n-2)_(l-1).
BigInt path_count(int n, int L);

// All self-avoiding directed u -> v paths in K_n with length <= L, ordered by
// length then lexicographically. Throws kBudget if n exceeds 'guard'.
std::vector<Path> enum_paths(int n, int u, int v, CutOff L, int guard = kDefaultPathGuard);

enum class PairVariant { kDisjoint, kType1, kType2, kOtherSame, kOtherOpposite };

std::string to_string(PairVariant variant);

// Overlap of a path pair (a -> s, s -> b). Edges are compared ignoring
// orientation. 'mu' counts the maximal runs of non-shared edges of the second
// path, split wherever that path touches a vertex of the first.
struct Overlap {
  int len_a = 0;
  int len_b = 0;
  int delta = 0;   // edges of the second path not in the first
  int mu = 0;
  int common = 0;  // len_b - delta
  friend bool operator==(const Overlap&, const Overlap&) = default;
};

// Type1 fills (i, j); Type2 fills (i, j, k, l, m); the rest leave params zero.
//   Type1: len_a = i+1, len_b = j+1, the only shared edge is the one at s.
//   Type2: a -(i)-> x -(k)-> y -(l)-> s and s -(m)-> x -(k)-> y -(j)-> b, the
//          shared edges being exactly the x -> y run in the same direction.
struct PairClass {
  PairVariant variant = PairVariant::kDisjoint;
  std::array<int, 5> params{};
  Overlap overlap;
  bool opposite = false;  // some shared edge is traversed both ways
  friend bool operator==(const PairClass&, const PairClass&) = default;
};

PairClass classify_pair(const Path& path_a, const Path& path_b);

// Cov(I_a, I_b) for the two path indicators at edge probability p.
Rational pair_cov(const Path& path_a, const Path& path_b, const Rational& p, int n);
Rational pair_kernel(const PairClass& cls, const Rational& p);

struct PairSumRow {
  PairVariant variant;
  std::string parameters;  // "i=0;j=1" style key
  BigInt pairs;
  Rational subtotal;
};

struct PairSum {
  int n = 0;
  int L = 0;
  Rational p;
  Rational total;
  std::map<PairVariant, Rational> by_class;
  std::map<PairVariant, BigInt> pairs_by_class;
  std::vector<PairSumRow> rows;
};

// Sum over all (a -> s, s -> b) path pairs of length <= L of the indicator
// covariances, i.e. Cov(X'_A, X'_B) for the truncated path counts.
PairSum cov_pairsum(int n, CutOff L, const Rational& p, unsigned threads = 0, int guard = kDefaultPathGuard);

// "variant,parameters,pairs,subtotal" with subtotal as num/den.
std::string pairsum_csv(const PairSum& sum);

// Exact pair counts of the two leading shapes, built constructively.
BigInt count_type1(int n, int i, int j, int guard = kDefaultPathGuard);
BigInt count_type2(int n, int i, int j, int k, int l, int m, int guard = kDefaultPathGuard);

// E[X'_A] = sum_{l=1}^{min(L, n-1)} (n-2)_(l-1) (p/2)^l.
Rational expected_paths(int n, const Rational& p, CutOff L);

}  // namespace opl
