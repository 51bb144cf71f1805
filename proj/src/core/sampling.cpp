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
#include "core/sampling.hpp"

#include "core/error.hpp"

namespace opl {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53U;
constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

EdgeSampler::EdgeSampler(const Rational& p) {
  if (p < 0 || p > 1) throw_parameter("p must lie in [0, 1], got " + to_string(p));
  always_present_ = (p == 1);
  threshold_ = always_present_ ? 0 : scaled_threshold(p, 63);
}

void EdgeSampler::draw(std::uint64_t seed, std::uint32_t stream, std::uint64_t index,
                       OrientedConfiguration& config) const {
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed),
                                         static_cast<std::uint32_t>(seed >> 32)};
  const std::size_t m = config.pair_count();
  for (std::size_t block = 0; 2 * block < m; ++block) {
    const auto out = philox4x32_10({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(index),
                                    static_cast<std::uint32_t>(index >> 32), stream},
                                   key);
    const std::uint64_t words[2] = {out[0] | (static_cast<std::uint64_t>(out[1]) << 32),
                                    out[2] | (static_cast<std::uint64_t>(out[3]) << 32)};
    for (std::size_t lane = 0; lane < 2 && 2 * block + lane < m; ++lane) {
      const std::uint64_t w = words[lane];
      EdgeState s = EdgeState::kAbsent;
      if (always_present_ || (w >> 1) < threshold_) {
        s = (w & 1U) ? EdgeState::kBackward : EdgeState::kForward;
      }
      config.set_state(2 * block + lane, s);
    }
  }
}

OrientedConfiguration sample_oriented(const Params& params, RngStream& rng) {
  OrientedConfiguration config(params.n);
  EdgeSampler(params.p).draw(rng.seed, rng.stream, rng.position, config);
  ++rng.position;
  return config;
}

}  // namespace opl
