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
#include "opl/opl.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "core/asymptotics.hpp"
#include "core/counts_cache.hpp"
#include "core/error.hpp"
#include "core/exact_engine.hpp"
#include "core/montecarlo.hpp"
#include "core/path_pairs.hpp"

struct opl_counts {
  opl::CountsTable table;
};

struct opl_poly {
  opl::Polynomial poly;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

opl_status status_for(opl::ErrorKind kind) {
  switch (kind) {
    case opl::ErrorKind::kParameter: return OPL_ERR_PARAMETER;
    case opl::ErrorKind::kBudget: return OPL_ERR_BUDGET;
    case opl::ErrorKind::kContract: return OPL_ERR_CONTRACT;
    case opl::ErrorKind::kIo: return OPL_ERR_IO;
  }
  return OPL_ERR_INTERNAL;
}

template <class F>
opl_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return OPL_OK;
  } catch (const opl::Error& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return OPL_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) opl::throw_parameter(what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

opl::Rational rational_arg(const char* text, const char* name) {
  if (!text) opl::throw_parameter(std::string(name) + " is null");
  return opl::parse_rational(text);
}

json estimate_json(const opl::McEstimate& e) {
  return {{"n", e.n},
          {"p", opl::to_string(e.p)},
          {"p_float", e.p.get_d()},
          {"samples", e.samples},
          {"seed", e.seed},
          {"stream", e.stream},
          {"stream_count", e.stream_count},
          {"pA_hat", e.pa_hat},
          {"pB_hat", e.pb_hat},
          {"pAB_hat", e.pab_hat},
          {"cov_hat", e.cov_hat},
          {"std_err", e.std_err},
          {"wall_time", e.wall_time}};
}

opl::RngStream to_stream(const opl_rng* rng) { return opl::RngStream(rng->seed, rng->stream, rng->position); }

}  // namespace

extern "C" {

OPL_API const char* opl_version(void) { return OPL_VERSION_STRING; }
OPL_API const char* opl_last_error(void) { return g_last_error.c_str(); }
OPL_API void opl_string_free(char* s) { std::free(s); }
OPL_API uint64_t opl_default_budget(void) { return opl::kDefaultBudget; }
OPL_API uint64_t opl_deep_budget(void) { return opl::kDeepBudget; }

OPL_API opl_status opl_edge_index(int i, int j, int n, uint64_t* out) {
  return guarded([&] {
    require(out, "out is null");
    *out = opl::edge_index(i, j, n);
  });
}

OPL_API opl_status opl_rational_canonical(const char* x, char** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = dup_string(opl::to_string(rational_arg(x, "x")));
  });
}

OPL_API opl_status opl_rational_to_double(const char* x, double* out) {
  return guarded([&] {
    require(out, "out is null");
    *out = rational_arg(x, "x").get_d();
  });
}

OPL_API opl_status opl_scaled_p(const char* c, int n, char** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = dup_string(opl::to_string(opl::Params::from_scaled(n, rational_arg(c, "c")).p));
  });
}

OPL_API opl_status opl_rational_lerp(const char* lo, const char* hi, uint64_t step, uint64_t steps, char** out) {
  return guarded([&] {
    require(out, "out is null");
    require(steps > 0 && step <= steps, "lerp needs 0 <= step <= steps, steps > 0");
    const opl::Rational a = rational_arg(lo, "lo"), b = rational_arg(hi, "hi");
    opl::Rational t(opl::BigInt(static_cast<unsigned long>(step)), opl::BigInt(static_cast<unsigned long>(steps)));
    t.canonicalize();
    *out = dup_string(opl::to_string(opl::Rational(a + (b - a) * t)));
  });
}

OPL_API opl_status opl_counts_enumerate(int n, uint64_t budget, unsigned threads, opl_counts** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = new opl_counts{opl::enumerate_counts(n, budget, threads)};
  });
}

OPL_API opl_status opl_counts_cached(int n, uint64_t budget, unsigned threads, const char* cache_dir,
                                     int* from_cache, opl_counts** out) {
  return guarded([&] {
    require(out && cache_dir, "null argument");
    auto found = opl::CountsCache(cache_dir).load_or_enumerate(n, budget, threads);
    if (from_cache) *from_cache = found.from_cache ? 1 : 0;
    *out = new opl_counts{std::move(found.counts)};
  });
}

OPL_API opl_status opl_counts_from_json(const char* text, opl_counts** out) {
  return guarded([&] {
    require(out && text, "null argument");
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw opl::Error(opl::ErrorKind::kIo, std::string("invalid JSON: ") + e.what());
    }
    *out = new opl_counts{opl::counts_from_json(doc)};
  });
}

OPL_API opl_status opl_counts_to_json(const opl_counts* counts, char** out) {
  return guarded([&] {
    require(counts && out, "null argument");
    *out = dup_string(opl::counts_to_json(counts->table).dump());
  });
}

OPL_API int opl_counts_n(const opl_counts* counts) { return counts ? counts->table.n : 0; }
OPL_API void opl_counts_free(opl_counts* counts) { delete counts; }

OPL_API opl_status opl_counts_probabilities(const opl_counts* counts, const char* p, char** out_json) {
  return guarded([&] {
    require(counts && out_json, "null argument");
    const auto prob = opl::prob_from_counts(counts->table, rational_arg(p, "p"));
    const json doc = {{"p", opl::to_string(rational_arg(p, "p"))},
                      {"P_A", opl::to_string(prob.a)},
                      {"P_B", opl::to_string(prob.b)},
                      {"P_AB", opl::to_string(prob.ab)},
                      {"cov", opl::to_string(prob.covariance())}};
    *out_json = dup_string(doc.dump());
  });
}

OPL_API opl_status opl_poly_from_counts(const opl_counts* counts, opl_poly** out) {
  return guarded([&] {
    require(counts && out, "null argument");
    *out = new opl_poly{opl::cov_polynomial(counts->table)};
  });
}

OPL_API void opl_poly_free(opl_poly* poly) { delete poly; }
OPL_API size_t opl_poly_degree(const opl_poly* poly) { return poly ? poly->poly.degree() : 0; }

OPL_API opl_status opl_poly_coefficients(const opl_poly* poly, char** out_json) {
  return guarded([&] {
    require(poly && out_json, "null argument");
    auto arr = json::array();
    for (const auto& c : poly->poly.coefficients()) arr.push_back(opl::to_string(c));
    *out_json = dup_string(arr.dump());
  });
}

OPL_API opl_status opl_poly_eval(const opl_poly* poly, const char* x, char** out) {
  return guarded([&] {
    require(poly && out, "null argument");
    *out = dup_string(opl::to_string(poly->poly(rational_arg(x, "x"))));
  });
}

OPL_API opl_status opl_poly_roots(const opl_poly* poly, const char* lo, const char* hi, const char* tol,
                                  unsigned grid, char** out_json) {
  return guarded([&] {
    require(poly && out_json, "null argument");
    const auto brackets = opl::find_critical_exact(poly->poly, rational_arg(lo, "lo"), rational_arg(hi, "hi"),
                                                   rational_arg(tol, "tol"), grid);
    auto arr = json::array();
    for (const auto& b : brackets) {
      arr.push_back({{"lo", opl::to_string(b.lo)},
                     {"hi", opl::to_string(b.hi)},
                     {"lo_float", b.lo.get_d()},
                     {"hi_float", b.hi.get_d()}});
    }
    *out_json = dup_string(arr.dump());
  });
}

OPL_API opl_status opl_percolation_prob(int n, const char* q, int u, int v, uint64_t budget, char** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = dup_string(opl::to_string(opl::percolation_prob(n, rational_arg(q, "q"), u, v, budget)));
  });
}

OPL_API int opl_default_cutoff(int n) {
  int L = 0;
  guarded([&] { L = opl::CutOff::default_for(n).length; });
  return L;
}

OPL_API opl_status opl_pairsum(int n, int L, const char* p, unsigned threads, char** out_json, char** out_csv) {
  return guarded([&] {
    require(out_json, "out_json is null");
    const auto sum = opl::cov_pairsum(n, opl::CutOff(L), rational_arg(p, "p"), threads);
    json by_class = json::object(), pairs = json::object();
    for (const auto& [variant, value] : sum.by_class) by_class[opl::to_string(variant)] = opl::to_string(value);
    for (const auto& [variant, count] : sum.pairs_by_class) pairs[opl::to_string(variant)] = count.get_str();
    const json doc = {{"n", sum.n},
                      {"L", sum.L},
                      {"p", opl::to_string(sum.p)},
                      {"total", opl::to_string(sum.total)},
                      {"total_float", sum.total.get_d()},
                      {"by_class", by_class},
                      {"pairs_by_class", pairs}};
    std::string csv = out_csv ? opl::pairsum_csv(sum) : std::string();
    char* json_out = dup_string(doc.dump());
    if (out_csv) {
      try {
        *out_csv = dup_string(csv);
      } catch (...) {
        std::free(json_out);
        throw;
      }
    }
    *out_json = json_out;
  });
}

OPL_API opl_status opl_count_type1(int n, int i, int j, char** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = dup_string(opl::count_type1(n, i, j).get_str());
  });
}

OPL_API opl_status opl_count_type2(int n, int i, int j, int k, int l, int m, char** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = dup_string(opl::count_type2(n, i, j, k, l, m).get_str());
  });
}

OPL_API opl_status opl_expected_paths(int n, const char* p, int L, char** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = dup_string(opl::to_string(opl::expected_paths(n, rational_arg(p, "p"), opl::CutOff(L))));
  });
}

OPL_API opl_status opl_classify_pair(const int* path_a, size_t len_a, const int* path_b, size_t len_b,
                                     char** out_json) {
  return guarded([&] {
    require(path_a && path_b && out_json, "null argument");
    const opl::Path a{std::vector<int>(path_a, path_a + len_a)};
    const opl::Path b{std::vector<int>(path_b, path_b + len_b)};
    if (a.vertices.size() < 2 || b.vertices.size() < 2) {
      throw opl::Error(opl::ErrorKind::kContract, "paths need at least two vertices");
    }
    const auto cls = opl::classify_pair(a, b);
    const json doc = {{"variant", opl::to_string(cls.variant)},
                      {"params", cls.params},
                      {"len_a", cls.overlap.len_a},
                      {"len_b", cls.overlap.len_b},
                      {"delta", cls.overlap.delta},
                      {"mu", cls.overlap.mu},
                      {"common", cls.overlap.common}};
    *out_json = dup_string(doc.dump());
  });
}

OPL_API double opl_quartic(double c) { return opl::asymptotics::quartic(c); }

OPL_API int64_t opl_quartic_discriminant(void) {
  return opl::asymptotics::discriminant(opl::asymptotics::quartic_coefficients());
}

OPL_API opl_status opl_find_c_roots(double tol, double* c1, double* c2) {
  return guarded([&] {
    require(c1 && c2, "null argument");
    const auto roots = opl::asymptotics::find_c_roots(tol);
    *c1 = roots.c1;
    *c2 = roots.c2;
  });
}

OPL_API opl_status opl_main_formula(double c, int n, opl_asymptotic* out) {
  return guarded([&] {
    require(out, "out is null");
    const auto r = opl::asymptotics::main_formula(c, n);
    *out = opl_asymptotic{r.c, r.n, r.value, r.type1, r.type2};
  });
}

OPL_API opl_status opl_truncated_series(double c, int terms, double* type1, double* type2) {
  return guarded([&] {
    require(type1 && type2, "null argument");
    const auto s = opl::asymptotics::truncated_series(c, terms);
    *type1 = s.type1;
    *type2 = s.type2;
  });
}

OPL_API opl_status opl_mc_estimate(int n, const char* p, uint64_t samples, opl_rng* rng, unsigned threads,
                                   char** out_json) {
  return guarded([&] {
    require(rng && out_json, "null argument");
    opl::RngStream stream = to_stream(rng);
    const auto est = opl::mc_estimate(opl::Params(n, rational_arg(p, "p")), samples, stream, threads);
    *out_json = dup_string(estimate_json(est).dump());
    rng->position = stream.position;
  });
}

OPL_API opl_status opl_mc_scan(int n, const char* const* grid, size_t grid_len, uint64_t samples,
                               const opl_rng* rng, unsigned threads, char** out_json) {
  return guarded([&] {
    require(rng && out_json && (grid || grid_len == 0), "null argument");
    std::vector<opl::Rational> points;
    for (size_t r = 0; r < grid_len; ++r) points.push_back(rational_arg(grid[r], "grid point"));
    const auto curve = opl::mc_scan(n, points, samples, to_stream(rng), threads);
    auto rows = json::array();
    for (const auto& row : curve.rows) rows.push_back(estimate_json(row.estimate));
    *out_json = dup_string(json{{"n", curve.n}, {"rows", rows}}.dump());
  });
}

OPL_API opl_status opl_locate_sign_change(int n, const char* lo, const char* hi, uint64_t budget,
                                          const opl_rng* rng, unsigned threads, char** out_json) {
  return guarded([&] {
    require(rng && out_json, "null argument");
    opl::SignSearchOptions options;
    options.threads = threads;
    const auto found = opl::locate_sign_change(n, rational_arg(lo, "lo"), rational_arg(hi, "hi"), budget,
                                               to_stream(rng), options);
    auto points = json::array();
    for (const auto& pt : found.points) {
      auto e = estimate_json(pt.estimate);
      e["sign"] = pt.sign;
      points.push_back(e);
    }
    json doc = {{"determined", found.determined},
                {"confidence", found.confidence},
                {"samples_used", found.samples_used},
                {"budget", budget},
                {"points", points}};
    if (found.determined) {
      doc["p_lo"] = opl::to_string(found.p_lo);
      doc["p_hi"] = opl::to_string(found.p_hi);
    } else {
      doc["p_lo"] = nullptr;
      doc["p_hi"] = nullptr;
    }
    *out_json = dup_string(doc.dump());
  });
}

}  // extern "C"
