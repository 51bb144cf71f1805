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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "core/rational.hpp"

namespace opl {

// Fixed vertex roles. Every result in this library refers to these ids.
inline constexpr int kVertexA = 0;
inline constexpr int kVertexB = 1;
inline constexpr int kVertexS = 2;

// Largest vertex count accepted by the exact (enumerating) code paths.
inline constexpr int kMaxExactVertices = 16;

enum class EdgeState : std::uint8_t { kAbsent = 0, kForward = 1, kBackward = 2 };

// Model parameters. p is always exact; from_scaled() builds p = 2c/n.
struct Params {
  int n = 3;
  Rational p = 0;

  Params() = default;
  Params(int n, Rational p);
  static Params from_scaled(int n, const Rational& c);
};

std::size_t pair_count(int n);

// Canonical flat index of the unordered pair {i, j}, i < j < n.
std::size_t edge_index(int i, int j, int n);
std::pair<int, int> edge_pair(std::size_t index, int n);

// One state per unordered vertex pair of K_n, two bits each.
class OrientedConfiguration {
 public:
  explicit OrientedConfiguration(int n);

  int n() const noexcept { return n_; }
  std::size_t pair_count() const noexcept { return pairs_; }

  EdgeState state(std::size_t index) const;
  void set_state(std::size_t index, EdgeState s);

  // State of the pair {i, j} as seen from i: Forward means i -> j.
  EdgeState directed_state(int i, int j) const;
  // Sets the edge i -> j (i and j in either order).
  void add_arc(int from, int to);

  std::size_t present_count() const;
  OrientedConfiguration reversed() const;

  friend bool operator==(const OrientedConfiguration&, const OrientedConfiguration&) = default;

 private:
  int n_;
  std::size_t pairs_;
  std::vector<std::uint64_t> words_;
};

// Out-neighbour bitsets, one row of ceil(n/64) words per vertex.
class Adjacency {
 public:
  explicit Adjacency(const OrientedConfiguration& config);

  int n() const noexcept { return n_; }
  std::span<const std::uint64_t> row(int v) const {
    return {bits_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  bool reaches(int u, int v) const;

 private:
  int n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

bool reaches(const OrientedConfiguration& config, int u, int v);

struct Events {
  bool a_to_s = false;
  bool s_to_b = false;
  friend bool operator==(const Events&, const Events&) = default;
};

Events events(const OrientedConfiguration& config);

// Self-avoiding directed path v0 -> v1 -> ... -> vl.
struct Path {
  std::vector<int> vertices;

  std::size_t length() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
  int front() const { return vertices.front(); }
  int back() const { return vertices.back(); }
  friend bool operator==(const Path&, const Path&) = default;
};

// Throws kContract unless the path is self-avoiding with length >= 1 and all
// vertices are below n.
void validate_path(const Path& path, int n);

}  // namespace opl
