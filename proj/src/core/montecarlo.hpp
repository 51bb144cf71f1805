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
#include <vector>

#include "core/graph_model.hpp"
#include "core/sampling.hpp"

namespace opl {

inline constexpr int kBatches = 50;
inline constexpr std::uint64_t kMinSamples = 1000;

// Raw event counters for one batch of samples.
struct BatchTally {
  std::uint64_t samples = 0, a = 0, b = 0, ab = 0;
  BatchTally& operator+=(const BatchTally& o) {
    samples += o.samples;
    a += o.a;
    b += o.b;
    ab += o.ab;
    return *this;
  }
  friend bool operator==(const BatchTally&, const BatchTally&) = default;
};

// All estimates are computed from merged integer counters, so they do not
// depend on how the samples were split across threads.
struct McEstimate {
  int n = 0;
  Rational p;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  std::uint32_t stream_count = 1;
  double pa_hat = 0, pb_hat = 0, pab_hat = 0;
  double cov_hat = 0;
  double std_err = 0;  // batch means over kBatches batch covariances
  double wall_time = 0;
  std::vector<BatchTally> batches;

  // Bitwise comparison of everything except wall time.
  bool same_result(const McEstimate& o) const;
};

// Combines batch counters into estimates (cov_hat, std_err, ...).
void finalize_estimate(McEstimate& est);

// Draws 'samples' configurations starting at rng.position (then advances
// it). Sample t lands in batch floor(t * kBatches / samples).
McEstimate mc_estimate(const Params& params, std::uint64_t samples, RngStream& rng, unsigned threads = 1);

struct ScanRow {
  Rational p;
  McEstimate estimate;
};

struct ScanCurve {
  int n = 0;
  std::vector<ScanRow> rows;
};

// Row r uses stream rng.stream + r from position 0. Grid strictly ascending.
ScanCurve mc_scan(int n, const std::vector<Rational>& grid, std::uint64_t samples, const RngStream& rng,
                  unsigned threads = 1);

struct SignPoint {
  Rational p;
  McEstimate estimate;
  int sign = 0;  // +1 / -1 when |cov_hat| > 3 std_err, else 0
};

struct SignChange {
  bool determined = false;
  Rational p_lo, p_hi;
  // min over the two bracket ends of Phi(|cov_hat| / std_err): the normal
  // approximation to the probability each end's sign is right.
  double confidence = 0;
  std::uint64_t samples_used = 0;
  std::vector<SignPoint> points;  // in evaluation order
};

struct SignSearchOptions {
  int max_bisections = 8;
  int rounds_per_point = 4;
  double significance = 3.0;
  unsigned threads = 1;
};

// Adaptive bisection for a sign change of Cov(A, B) on [lo, hi]. Budget is the
// total sample count; each evaluated point gets budget / (2 + max_bisections)
// split into rounds, and stops sampling once significant. Point q (in
// evaluation order) samples stream rng.stream + q.
SignChange locate_sign_change(int n, const Rational& lo, const Rational& hi, std::uint64_t budget,
                              const RngStream& rng, const SignSearchOptions& options = {});

}  // namespace opl
