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
#include "core/graph_model.hpp"

#include <bit>
#include <string>

#include "core/error.hpp"

namespace opl {

Params::Params(int n_in, Rational p_in) : n(n_in), p(std::move(p_in)) {
  if (n < 3) throw_parameter("n must be at least 3, got " + std::to_string(n));
  p.canonicalize();
  if (p < 0 || p > 1) throw_parameter("p must lie in [0, 1], got " + to_string(p));
}

Params Params::from_scaled(int n, const Rational& c) {
  if (n < 3) throw_parameter("n must be at least 3, got " + std::to_string(n));
  return Params(n, Rational(2 * c / n));
}

std::size_t pair_count(int n) {
  if (n < 0) throw_parameter("negative vertex count");
  if (n < 2) return 0;
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

std::size_t edge_index(int i, int j, int n) {
  if (i < 0 || i >= j || j >= n) {
    throw_parameter("invalid pair (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") for n = " + std::to_string(n));
  }
  const auto si = static_cast<std::size_t>(i);
  return si * static_cast<std::size_t>(n) - si * (si + 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

std::pair<int, int> edge_pair(std::size_t index, int n) {
  if (index >= pair_count(n)) throw_parameter("edge index out of range");
  int i = 0;
  std::size_t row = static_cast<std::size_t>(n - 1);
  while (index >= row) {
    index -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + static_cast<int>(index)};
}

OrientedConfiguration::OrientedConfiguration(int n)
    : n_(n), pairs_(opl::pair_count(n)), words_((pairs_ + 31) / 32, 0) {
  if (n < 2) throw_parameter("configuration needs at least two vertices");
}

EdgeState OrientedConfiguration::state(std::size_t index) const {
  if (index >= pairs_) throw_parameter("edge index out of range");
  return static_cast<EdgeState>((words_[index / 32] >> (2 * (index % 32))) & 3U);
}

void OrientedConfiguration::set_state(std::size_t index, EdgeState s) {
  if (index >= pairs_) throw_parameter("edge index out of range");
  const unsigned shift = 2 * (index % 32);
  auto& w = words_[index / 32];
  w = (w & ~(std::uint64_t{3} << shift)) | (static_cast<std::uint64_t>(s) << shift);
}

EdgeState OrientedConfiguration::directed_state(int i, int j) const {
  if (i < j) return state(edge_index(i, j, n_));
  const EdgeState s = state(edge_index(j, i, n_));
  if (s == EdgeState::kForward) return EdgeState::kBackward;
  if (s == EdgeState::kBackward) return EdgeState::kForward;
  return s;
}

void OrientedConfiguration::add_arc(int from, int to) {
  if (from < to) {
    set_state(edge_index(from, to, n_), EdgeState::kForward);
  } else {
    set_state(edge_index(to, from, n_), EdgeState::kBackward);
  }
}

std::size_t OrientedConfiguration::present_count() const {
  // A pair is present iff either of its two bits is set.
  constexpr std::uint64_t kLow = 0x5555555555555555ULL;
  std::size_t k = 0;
  for (auto w : words_) k += static_cast<std::size_t>(std::popcount((w | (w >> 1)) & kLow));
  return k;
}

OrientedConfiguration OrientedConfiguration::reversed() const {
  constexpr std::uint64_t kLow = 0x5555555555555555ULL;
  OrientedConfiguration r = *this;
  for (auto& w : r.words_) w = ((w & kLow) << 1) | ((w >> 1) & kLow);
  return r;
}

Adjacency::Adjacency(const OrientedConfiguration& config)
    : n_(config.n()),
      words_((static_cast<std::size_t>(config.n()) + 63) / 64),
      bits_(static_cast<std::size_t>(config.n()) * words_, 0) {
  std::size_t index = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j, ++index) {
      switch (config.state(index)) {
        case EdgeState::kForward:
          bits_[static_cast<std::size_t>(i) * words_ + static_cast<std::size_t>(j) / 64] |= std::uint64_t{1} << (j % 64);
          break;
        case EdgeState::kBackward:
          bits_[static_cast<std::size_t>(j) * words_ + static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
          break;
        case EdgeState::kAbsent:
          break;
      }
    }
  }
}

bool Adjacency::reaches(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw_parameter("vertex id out of range");
  if (u == v) return true;
  std::vector<std::uint64_t> seen(words_, 0);
  std::vector<int> stack{u};
  seen[static_cast<std::size_t>(u) / 64] |= std::uint64_t{1} << (u % 64);
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    const auto out = row(x);
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t fresh = out[w] & ~seen[w];
      seen[w] |= fresh;
      while (fresh) {
        const int y = static_cast<int>(w * 64) + std::countr_zero(fresh);
        if (y == v) return true;
        stack.push_back(y);
        fresh &= fresh - 1;
      }
    }
  }
  return false;
}

bool reaches(const OrientedConfiguration& config, int u, int v) {
  return Adjacency(config).reaches(u, v);
}

Events events(const OrientedConfiguration& config) {
  if (config.n() < 3) throw_parameter("events need n >= 3");
  const Adjacency adj(config);
  return {adj.reaches(kVertexA, kVertexS), adj.reaches(kVertexS, kVertexB)};
}

void validate_path(const Path& path, int n) {
  if (path.vertices.size() < 2) throw Error(ErrorKind::kContract, "path must have at least one edge");
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int v : path.vertices) {
    if (v < 0 || v >= n) throw Error(ErrorKind::kContract, "path vertex out of range");
    if (used[static_cast<std::size_t>(v)]) throw Error(ErrorKind::kContract, "path repeats a vertex");
    used[static_cast<std::size_t>(v)] = true;
  }
}

}  // namespace opl
