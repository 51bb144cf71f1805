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
#include <cstdint>

#include "core/graph_model.hpp"

namespace opl {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Counter-based: output depends only on (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Reproducible stream of oriented configurations.
//
// Sample t of stream (seed, stream) draws edge e from the 64-bit word
//   word(e) = lane (e % 2) of philox4x32_10({e / 2, t_lo, t_hi, stream}, {seed_lo, seed_hi})
// where lanes are (x0 | x1 << 32) and (x2 | x3 << 32). Bit 0 picks the
// orientation (0 -> Forward), bits 1..63 are compared against floor(p * 2^63)
// for presence. Every edge consumes exactly one word whatever the outcome,
// so the draw for edge e of sample t never depends on p or on other edges.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  std::uint64_t position = 0;  // index of the next sample

  RngStream() = default;
  RngStream(std::uint64_t seed_in, std::uint32_t stream_in, std::uint64_t position_in = 0)
      : seed(seed_in), stream(stream_in), position(position_in) {}

  RngStream with_stream(std::uint32_t id) const { return RngStream(seed, id, 0); }
};

// Presence/orientation sampler for a fixed p; cheap to copy.
class EdgeSampler {
 public:
  explicit EdgeSampler(const Rational& p);

  // Fills config with sample number 'index' of the given stream.
  void draw(std::uint64_t seed, std::uint32_t stream, std::uint64_t index,
            OrientedConfiguration& config) const;

 private:
  std::uint64_t threshold_;  // on the 63-bit presence word
  bool always_present_;
};

OrientedConfiguration sample_oriented(const Params& params, RngStream& rng);

}  // namespace opl
