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
#include "core/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "core/error.hpp"

namespace opl {

bool McEstimate::same_result(const McEstimate& o) const {
  return n == o.n && p == o.p && samples == o.samples && seed == o.seed && stream == o.stream &&
         stream_count == o.stream_count && batches == o.batches && pa_hat == o.pa_hat && pb_hat == o.pb_hat &&
         pab_hat == o.pab_hat && cov_hat == o.cov_hat && std_err == o.std_err;
}

void finalize_estimate(McEstimate& est) {
  BatchTally total;
  for (const auto& b : est.batches) total += b;
  est.samples = total.samples;
  if (total.samples == 0) {
    est.pa_hat = est.pb_hat = est.pab_hat = est.cov_hat = est.std_err = 0;
    return;
  }
  const auto s = static_cast<double>(total.samples);
  est.pa_hat = static_cast<double>(total.a) / s;
  est.pb_hat = static_cast<double>(total.b) / s;
  est.pab_hat = static_cast<double>(total.ab) / s;
  est.cov_hat = est.pab_hat - est.pa_hat * est.pb_hat;

  std::vector<double> covs;
  for (const auto& b : est.batches) {
    if (b.samples == 0) continue;
    const auto bs = static_cast<double>(b.samples);
    const double pa = static_cast<double>(b.a) / bs;
    const double pb = static_cast<double>(b.b) / bs;
    covs.push_back(static_cast<double>(b.ab) / bs - pa * pb);
  }
  if (covs.size() < 2) {
    est.std_err = 0;
    return;
  }
  double mean = 0;
  for (double c : covs) mean += c;
  mean /= static_cast<double>(covs.size());
  double ss = 0;
  for (double c : covs) ss += (c - mean) * (c - mean);
  const double var = ss / static_cast<double>(covs.size() - 1);
  est.std_err = std::sqrt(var / static_cast<double>(covs.size()));
}

McEstimate mc_estimate(const Params& params, std::uint64_t samples, RngStream& rng, unsigned threads) {
  if (samples < kMinSamples) {
    throw_parameter("Monte Carlo needs at least " + std::to_string(kMinSamples) + " samples, got " +
                    std::to_string(samples));
  }
  const auto start = std::chrono::steady_clock::now();
  McEstimate est;
  est.n = params.n;
  est.p = params.p;
  est.seed = rng.seed;
  est.stream = rng.stream;
  est.batches.assign(kBatches, BatchTally{});

  const EdgeSampler sampler(params.p);
  const std::uint64_t base = rng.position;
  auto run_batch = [&](int b) {
    const std::uint64_t lo = samples * static_cast<std::uint64_t>(b) / kBatches;
    const std::uint64_t hi = samples * static_cast<std::uint64_t>(b + 1) / kBatches;
    OrientedConfiguration config(params.n);
    BatchTally tally;
    for (std::uint64_t t = lo; t < hi; ++t) {
      sampler.draw(rng.seed, rng.stream, base + t, config);
      const Events ev = events(config);
      ++tally.samples;
      tally.a += ev.a_to_s;
      tally.b += ev.s_to_b;
      tally.ab += (ev.a_to_s && ev.s_to_b);
    }
    est.batches[static_cast<std::size_t>(b)] = tally;
  };

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, kBatches);
  if (threads == 1) {
    for (int b = 0; b < kBatches; ++b) run_batch(b);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int b = static_cast<int>(t); b < kBatches; b += static_cast<int>(threads)) run_batch(b);
      });
    }
  }
  rng.position += samples;
  finalize_estimate(est);
  est.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return est;
}

ScanCurve mc_scan(int n, const std::vector<Rational>& grid, std::uint64_t samples, const RngStream& rng,
                  unsigned threads) {
  if (grid.empty()) throw_parameter("scan grid is empty");
  for (std::size_t r = 1; r < grid.size(); ++r) {
    if (!(grid[r - 1] < grid[r])) throw_parameter("scan grid must be strictly ascending");
  }
  ScanCurve curve;
  curve.n = n;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    RngStream row_rng = rng.with_stream(rng.stream + static_cast<std::uint32_t>(r));
    curve.rows.push_back({grid[r], mc_estimate(Params(n, grid[r]), samples, row_rng, threads)});
  }
  return curve;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

SignChange locate_sign_change(int n, const Rational& lo, const Rational& hi, std::uint64_t budget,
                              const RngStream& rng, const SignSearchOptions& options) {
  if (!(lo >= 0 && lo < hi && hi <= 1)) throw_parameter("sign search needs 0 <= lo < hi <= 1");
  if (budget < 100000) throw_parameter("sign search budget must be at least 100000 samples");
  if (options.max_bisections < 0 || options.rounds_per_point < 1) throw_parameter("invalid sign search options");

  const std::uint64_t share = budget / static_cast<std::uint64_t>(2 + options.max_bisections);
  const std::uint64_t round = share / static_cast<std::uint64_t>(options.rounds_per_point);
  if (round < kMinSamples) throw_parameter("sign search budget too small for its per-point rounds");

  SignChange out;
  auto evaluate = [&](const Rational& p) {
    RngStream point_rng = rng.with_stream(rng.stream + static_cast<std::uint32_t>(out.points.size()));
    const Params params(n, p);
    McEstimate pooled;
    for (int r = 0; r < options.rounds_per_point; ++r) {
      McEstimate part = mc_estimate(params, round, point_rng, options.threads);
      out.samples_used += round;
      if (r == 0) {
        pooled = part;
      } else {
        for (std::size_t b = 0; b < pooled.batches.size(); ++b) pooled.batches[b] += part.batches[b];
        pooled.wall_time += part.wall_time;
      }
      finalize_estimate(pooled);
      if (std::fabs(pooled.cov_hat) > options.significance * pooled.std_err) break;
    }
    SignPoint pt{p, pooled, 0};
    if (std::fabs(pooled.cov_hat) > options.significance * pooled.std_err) pt.sign = pooled.cov_hat > 0 ? 1 : -1;
    out.points.push_back(pt);
    return pt;
  };
  auto conf = [](const SignPoint& pt) {
    return pt.estimate.std_err > 0 ? normal_cdf(std::fabs(pt.estimate.cov_hat) / pt.estimate.std_err) : 1.0;
  };

  SignPoint left = evaluate(lo);
  SignPoint right = evaluate(hi);
  if (left.sign == 0 || right.sign == 0 || left.sign == right.sign) return out;

  for (int step = 0; step < options.max_bisections; ++step) {
    const SignPoint mid = evaluate((left.p + right.p) / 2);
    if (mid.sign == 0) break;
    (mid.sign == left.sign ? left : right) = mid;
  }
  out.determined = true;
  out.p_lo = left.p;
  out.p_hi = right.p;
  out.confidence = std::min(conf(left), conf(right));
  return out;
}

}  // namespace opl
