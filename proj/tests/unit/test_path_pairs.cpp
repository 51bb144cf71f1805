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
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "core/asymptotics.hpp"
#include "core/error.hpp"
#include "core/path_pairs.hpp"
#include "oracle/brute_force.hpp"

using namespace opl;

namespace {

Path P(std::vector<int> v) { return Path{std::move(v)}; }

// Independent type recognition from edge sets.
struct Kind {
  std::string name;
  std::vector<int> params;
};

Kind oracle_kind(const std::vector<int>& ga, const std::vector<int>& gb) {
  using E = std::pair<int, int>;
  std::map<E, int> in_a;  // undirected edge -> index of arc in ga
  for (std::size_t t = 0; t + 1 < ga.size(); ++t)
    in_a[{std::min(ga[t], ga[t + 1]), std::max(ga[t], ga[t + 1])}] = static_cast<int>(t);
  std::vector<int> shared_b;  // positions in gb of shared edges
  bool opposite = false;
  for (std::size_t t = 0; t + 1 < gb.size(); ++t) {
    auto it = in_a.find({std::min(gb[t], gb[t + 1]), std::max(gb[t], gb[t + 1])});
    if (it == in_a.end()) continue;
    shared_b.push_back(static_cast<int>(t));
    if (ga[static_cast<std::size_t>(it->second)] != gb[t]) opposite = true;
  }
  const int la = static_cast<int>(ga.size()) - 1, lb = static_cast<int>(gb.size()) - 1;
  if (shared_b.empty()) return {"Disjoint", {}};
  if (opposite) {
    if (shared_b.size() == 1 && shared_b[0] == 0) return {"Type1", {la - 1, lb - 1}};
    return {"OtherOpposite", {}};
  }
  for (std::size_t t = 1; t < shared_b.size(); ++t)
    if (shared_b[t] != shared_b[t - 1] + 1) return {"OtherSame", {}};
  const int k = static_cast<int>(shared_b.size());
  const int m = shared_b[0];
  int i = 0;
  while (ga[static_cast<std::size_t>(i)] != gb[static_cast<std::size_t>(m)]) ++i;
  return {"Type2", {i, lb - m - k, k, la - i - k, m}};
}

std::vector<int> params_of(const PairClass& c) {
  if (c.variant == PairVariant::kType1) return {c.params[0], c.params[1]};
  if (c.variant == PairVariant::kType2) return {c.params.begin(), c.params.end()};
  return {};
}

}  // namespace

TEST_CASE("path enumeration") {
  auto three = enum_paths(3, kVertexA, kVertexS, CutOff(2));
  REQUIRE(three.size() == 2);
  CHECK(three[0] == P({0, 2}));
  CHECK(three[1] == P({0, 1, 2}));
  CHECK(enum_paths(4, kVertexA, kVertexS, CutOff(1)).size() == 1);

  auto five = enum_paths(5, kVertexA, kVertexS, CutOff(3));
  std::map<std::size_t, int> by_len;
  for (const auto& p : five) ++by_len[p.length()];
  CHECK(by_len[1] == 1);
  CHECK(by_len[2] == 3);
  CHECK(by_len[3] == 6);

  for (int n = 3; n <= 7; ++n) {
    for (int L = 1; L < n; ++L) {
      auto got = enum_paths(n, kVertexS, kVertexB, CutOff(L));
      std::set<std::vector<int>> unique;
      for (const auto& p : got) unique.insert(p.vertices);
      CHECK(unique.size() == got.size());
      CHECK(got.size() == oracle::paths(n, oracle::S, oracle::B, L).size());
      BigInt total = 0;
      for (int l = 1; l <= L; ++l) total += falling_factorial(n - 2, static_cast<unsigned long>(l - 1));
      CHECK(total == got.size());
      CHECK(path_count(n, L) == total);
    }
  }
  CHECK(path_count(7, 4) == 1 + 5 + 20 + 60);
  CHECK_THROWS_AS(enum_paths(13, kVertexA, kVertexS, CutOff(2)), Error);
  CHECK_THROWS_AS(enum_paths(5, kVertexA, kVertexA, CutOff(2)), Error);
  CHECK_THROWS_AS(CutOff(0), Error);
  CHECK(CutOff::default_for(12).length == static_cast<int>(std::ceil(std::log(12.0) * std::log(12.0))));
}

TEST_CASE("classification examples") {
  CHECK(classify_pair(P({0, 2}), P({2, 1})).variant == PairVariant::kDisjoint);
  auto t1 = classify_pair(P({0, 2}), P({2, 0, 1}));
  CHECK(t1.variant == PairVariant::kType1);
  CHECK(params_of(t1) == std::vector<int>{0, 1});
  auto t2 = classify_pair(P({0, 1, 2}), P({2, 0, 1}));
  CHECK(t2.variant == PairVariant::kType2);
  CHECK(params_of(t2) == std::vector<int>{0, 0, 1, 1, 1});
  CHECK(t2.overlap.delta == 1);
  CHECK(t2.overlap.common == 1);
  CHECK_THROWS_AS(classify_pair(P({2, 0}), P({2, 1})), Error);
}

TEST_CASE("kernel examples") {
  const Rational p(1, 3), h = p / 2;
  CHECK(pair_cov(P({0, 2}), P({2, 1}), p, 3) == 0);
  CHECK(pair_cov(P({0, 2}), P({2, 0, 1}), p, 3) == -h * h * h);
  CHECK(pair_cov(P({0, 1, 2}), P({2, 0, 1}), p, 3) == h * h * h - h * h * h * h);
}

TEST_CASE("classifier agrees with the edge-set oracle, every pair, n = 4..6") {
  for (int n = 4; n <= 6; ++n) {
    const auto pa = oracle::paths(n, oracle::A, oracle::S, n - 1);
    const auto pb = oracle::paths(n, oracle::S, oracle::B, n - 1);
    std::size_t total = 0;
    for (const auto& a : pa)
      for (const auto& b : pb) {
        const auto cls = classify_pair(Path{a}, Path{b});
        const auto want = oracle_kind(a, b);
        REQUIRE(to_string(cls.variant) == want.name);
        REQUIRE(params_of(cls) == want.params);
        ++total;
      }
    CHECK(total == pa.size() * pb.size());
  }
}

TEST_CASE("kernel equals the restricted-configuration oracle, n = 4, L = 3") {
  const auto pa = oracle::paths(4, oracle::A, oracle::S, 3);
  const auto pb = oracle::paths(4, oracle::S, oracle::B, 3);
  for (auto p : {Rational(1, 4), Rational(1, 2), Rational(5, 6)})
    for (const auto& a : pa)
      for (const auto& b : pb) REQUIRE(pair_cov(Path{a}, Path{b}, p, 4) == oracle::pair_cov(a, b, p));
}

TEST_CASE("pair sum equals the truncated-count covariance") {
  for (auto p : {Rational(1, 4), Rational(1, 2)}) {
    const auto sum = cov_pairsum(4, CutOff(3), p, 2);
    CHECK(sum.total == oracle::truncated_count_cov(4, 3, p));
    Rational parts = 0;
    for (const auto& [variant, value] : sum.by_class) parts += value;
    CHECK(parts == sum.total);
  }
  CHECK(cov_pairsum(5, CutOff(2), Rational(2, 7), 1).total == oracle::truncated_count_cov(5, 2, Rational(2, 7)));
  const auto zero = cov_pairsum(5, CutOff(4), 0, 1);
  CHECK(zero.total == 0);
  for (const auto& [variant, value] : zero.by_class) CHECK(value == 0);
}

TEST_CASE("fast pair sum matches aggregation of the reference classifier") {
  for (int n : {5, 6, 7}) {
    const Rational p(2, 9);
    const auto fast = cov_pairsum(n, CutOff(n - 1), p, 3);
    std::map<PairVariant, Rational> by;
    std::map<PairVariant, BigInt> count;
    const auto pa = enum_paths(n, kVertexA, kVertexS, CutOff(n - 1));
    const auto pb = enum_paths(n, kVertexS, kVertexB, CutOff(n - 1));
    for (const auto& a : pa)
      for (const auto& b : pb) {
        const auto cls = classify_pair(a, b);
        by[cls.variant] += pair_kernel(cls, p);
        count[cls.variant] += 1;
      }
    for (const auto& [variant, value] : by) {
      CHECK(fast.by_class.at(variant) == value);
      CHECK(fast.pairs_by_class.at(variant) == count[variant]);
    }
    Rational rows = 0;
    BigInt row_pairs = 0;
    for (const auto& r : fast.rows) {
      rows += r.subtotal;
      row_pairs += r.pairs;
    }
    CHECK(rows == fast.total);
    CHECK(row_pairs == BigInt(static_cast<unsigned long>(pa.size() * pb.size())));
  }
  const auto one = cov_pairsum(7, CutOff(5), Rational(1, 5), 1);
  const auto many = cov_pairsum(7, CutOff(5), Rational(1, 5), 4);
  CHECK(one.total == many.total);
  CHECK(pairsum_csv(one) == pairsum_csv(many));
}

TEST_CASE("structural type counts match brute-force classification") {
  for (int n = 3; n <= 7; ++n) {
    std::map<std::vector<int>, long> t1, t2;
    for (const auto& a : oracle::paths(n, oracle::A, oracle::S, n - 1))
      for (const auto& b : oracle::paths(n, oracle::S, oracle::B, n - 1)) {
        auto k = oracle_kind(a, b);
        if (k.name == "Type1") ++t1[k.params];
        if (k.name == "Type2") ++t2[k.params];
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i + j == 0) continue;
        auto it = t1.find({i, j});
        REQUIRE(count_type1(n, i, j) == (it == t1.end() ? 0 : it->second));
      }
    for (const auto& [key, value] : t2) REQUIRE(count_type2(n, key[0], key[1], key[2], key[3], key[4]) == value);
    // spot-check a few absent combinations
    CHECK(count_type2(n, n, 0, 1, 1, 1) == 0);
  }
  CHECK(count_type1(5, 0, 1) == 1);
  CHECK(count_type2(3, 0, 0, 1, 1, 1) == 1);
  // one way to place the single extra vertex
  CHECK(count_type1(6, 1, 1) == 3);
  CHECK_THROWS_AS(count_type1(5, 0, 0), Error);
  CHECK_THROWS_AS(count_type2(5, 0, 0, 0, 1, 1), Error);
  CHECK_THROWS_AS(count_type2(5, 0, 0, 1, 0, 1), Error);
}

TEST_CASE("expected path counts") {
  CHECK(expected_paths(3, 1, CutOff(2)) == Rational(3, 4));
  CHECK(expected_paths(3, 1, CutOff(5)) == Rational(3, 4));
  CHECK(expected_paths(7, 0, CutOff(4)) == 0);
  CHECK(expected_paths(4, Rational(2, 7), CutOff(1)) == Rational(1, 7));
  // average number of open a->s paths over all 27 triangle configurations
  mpq_class avg = 0;
  const auto pa = oracle::paths(3, oracle::A, oracle::S, 2);
  oracle::for_each_config(3, [&](const std::vector<int>&, const oracle::Digraph& g, int k) {
    long x = 0;
    for (const auto& q : pa) x += oracle::path_open(q, g);
    avg += oracle::weight(k, 3, 1) * x;
  });
  CHECK(avg == Rational(3, 4));
  for (int n : {10, 20, 40})
    for (double c : {0.2, 0.5, 0.9}) {
      const Rational cq(c);
      const auto L = CutOff::default_for(n);
      const double e = expected_paths(n, 2 * cq / n, L).get_d();
      double bound = 0;
      for (int l = 1; l <= L.length; ++l) bound += std::pow(c, l);
      CHECK(e <= bound / n);
    }
}

TEST_CASE("single-path expectation") {
  std::mt19937 gen(3);
  for (int t = 0; t < 50; ++t) {
    const int n = 4 + static_cast<int>(gen() % 3);
    auto all = oracle::paths(n, oracle::A, oracle::S, n - 1);
    const auto& path = all[gen() % all.size()];
    const Rational p(1 + static_cast<long>(gen() % 9), 10);
    // pair the path with itself: E[I^2] - E[I]^2 = h^l - h^{2l}
    const auto direct = oracle::pair_cov(path, path, p) ;
    Rational h = p / 2, hl = 1;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) hl *= h;
    CHECK(direct == hl - hl * hl);
  }
}

TEST_CASE("Type1 subtotal near the closed form, n = 12, L = 6, c = 0.1") {
  const int n = 12;
  const Rational c(1, 10);
  const auto sum = cov_pairsum(n, CutOff(6), 2 * c / n, 0);
  // same subtotal from the structural counts
  Rational structural = 0;
  const Rational h = c / n;
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= 5; ++j)
      if (i + j >= 1) structural -= count_type1(n, i, j) * pow(h, static_cast<unsigned long>(i + j + 2));
  CHECK(structural == sum.by_class.at(PairVariant::kType1));
  const double got = sum.by_class.at(PairVariant::kType1).get_d();
  const double want = asymptotics::main_formula(0.1, n).type1;
  CHECK(std::abs(got - want) <= 5.0 / n * std::abs(want));
}
