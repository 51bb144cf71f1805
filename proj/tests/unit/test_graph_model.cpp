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

#include <random>

#include "core/error.hpp"
#include "core/graph_model.hpp"

using namespace opl;

TEST_CASE("edge_index examples") {
  CHECK(edge_index(0, 1, 4) == 0);
  CHECK(edge_index(2, 3, 4) == 5);
  CHECK(edge_index(1, 3, 4) == 4);
  CHECK_THROWS_AS(edge_index(2, 2, 4), Error);
  CHECK_THROWS_AS(edge_index(3, 2, 4), Error);
  CHECK_THROWS_AS(edge_index(1, 4, 4), Error);
}

TEST_CASE("edge_index is a bijection for n <= 16") {
  for (int n = 2; n <= 16; ++n) {
    std::size_t expected = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        REQUIRE(edge_index(i, j, n) == expected);
        REQUIRE(edge_pair(expected, n) == std::pair<int, int>{i, j});
        ++expected;
      }
    CHECK(expected == pair_count(n));
  }
}

TEST_CASE("params validation") {
  CHECK_NOTHROW(Params(3, Rational(1, 2)));
  CHECK_THROWS_AS(Params(2, Rational(1, 2)), Error);
  CHECK_THROWS_AS(Params(5, Rational(3, 2)), Error);
  CHECK_THROWS_AS(Params(5, Rational(-1, 2)), Error);
  CHECK(Params::from_scaled(10, Rational(1, 2)).p == Rational(1, 10));
}

TEST_CASE("configuration states") {
  OrientedConfiguration c(5);
  CHECK(c.pair_count() == 10);
  CHECK(c.present_count() == 0);
  c.add_arc(3, 1);
  CHECK(c.state(edge_index(1, 3, 5)) == EdgeState::kBackward);
  CHECK(c.directed_state(3, 1) == EdgeState::kForward);
  c.set_state(edge_index(0, 4, 5), EdgeState::kForward);
  CHECK(c.present_count() == 2);
  auto r = c.reversed();
  CHECK(r.state(edge_index(1, 3, 5)) == EdgeState::kForward);
  CHECK(r.reversed() == c);
}

TEST_CASE("reachability examples") {
  OrientedConfiguration c(4);
  CHECK_FALSE(reaches(c, kVertexA, kVertexS));
  c.add_arc(kVertexA, kVertexS);
  CHECK(reaches(c, kVertexA, kVertexS));

  OrientedConfiguration chain(4);
  chain.add_arc(kVertexA, 3);
  chain.add_arc(3, kVertexS);
  CHECK(reaches(chain, kVertexA, kVertexS));
  CHECK_FALSE(reaches(chain, kVertexS, kVertexA));

  OrientedConfiguration both(3);
  both.add_arc(kVertexA, kVertexS);
  both.add_arc(kVertexS, kVertexB);
  CHECK(events(both) == Events{true, true});

  OrientedConfiguration rev(3);
  rev.add_arc(kVertexS, kVertexA);
  rev.add_arc(kVertexB, kVertexS);
  CHECK(events(rev) == Events{false, false});

  OrientedConfiguration tri(3);
  tri.add_arc(kVertexS, kVertexA);
  tri.add_arc(kVertexA, kVertexB);
  tri.add_arc(kVertexB, kVertexS);
  CHECK(events(tri) == Events{true, true});
}

TEST_CASE("reachability is reflexive, transitive and reverses with orientation") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + static_cast<int>(gen() % 10);
    OrientedConfiguration c(n);
    for (std::size_t e = 0; e < c.pair_count(); ++e) c.set_state(e, static_cast<EdgeState>(gen() % 3));
    const auto r = c.reversed();
    Adjacency adj(c);
    for (int u = 0; u < n; ++u) {
      REQUIRE(adj.reaches(u, u));
      for (int v = 0; v < n; ++v) {
        REQUIRE(adj.reaches(u, v) == reaches(r, v, u));
        if (!adj.reaches(u, v)) continue;
        for (int w = 0; w < n; ++w)
          if (adj.reaches(v, w)) REQUIRE(adj.reaches(u, w));
      }
    }
  }
}

TEST_CASE("wide configurations") {
  // more than 64 vertices exercises multi-word bitset rows
  const int n = 90;
  OrientedConfiguration c(n);
  for (int v = 0; v + 1 < n; ++v) c.add_arc(v, v + 1);
  CHECK(reaches(c, 0, n - 1));
  CHECK_FALSE(reaches(c, n - 1, 0));
  CHECK(c.present_count() == static_cast<std::size_t>(n - 1));
}

TEST_CASE("path validation") {
  CHECK_NOTHROW(validate_path(Path{{0, 3, 2}}, 4));
  CHECK_THROWS_AS(validate_path(Path{{0, 3, 0}}, 4), Error);
  CHECK_THROWS_AS(validate_path(Path{{0, 4}}, 4), Error);
  CHECK_THROWS_AS(validate_path(Path{{0}}, 4), Error);
  CHECK(Path{{0, 3, 2}}.length() == 2);
}
