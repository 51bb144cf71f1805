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

#include <filesystem>
#include <string>

#include <json.hpp>

#include "opl/opl.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  opl_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and errors") {
  CHECK(std::string(opl_version()).size() > 0);
  uint64_t idx = 0;
  CHECK(opl_edge_index(1, 3, 4, &idx) == OPL_OK);
  CHECK(idx == 4);
  CHECK(opl_edge_index(3, 1, 4, &idx) == OPL_ERR_PARAMETER);
  CHECK(std::string(opl_last_error()).size() > 0);
  CHECK(opl_edge_index(0, 1, 4, nullptr) != OPL_OK);
}

TEST_CASE("rationals") {
  char* s = nullptr;
  REQUIRE(opl_rational_canonical("0.25", &s) == OPL_OK);
  CHECK(take(s) == "1/4");
  REQUIRE(opl_rational_canonical("6/8", &s) == OPL_OK);
  CHECK(take(s) == "3/4");
  CHECK(opl_rational_canonical("x", &s) == OPL_ERR_PARAMETER);
  REQUIRE(opl_scaled_p("0.5", 10, &s) == OPL_OK);
  CHECK(take(s) == "1/10");
  REQUIRE(opl_rational_lerp("0", "1", 1, 4, &s) == OPL_OK);
  CHECK(take(s) == "1/4");
  double d = 0;
  REQUIRE(opl_rational_to_double("1/8", &d) == OPL_OK);
  CHECK(d == 0.125);
}

TEST_CASE("counts, probabilities and polynomial through handles") {
  opl_counts* c = nullptr;
  REQUIRE(opl_counts_enumerate(3, opl_default_budget(), 1, &c) == OPL_OK);
  CHECK(opl_counts_n(c) == 3);
  char* s = nullptr;
  REQUIRE(opl_counts_probabilities(c, "1", &s) == OPL_OK);
  auto pr = json::parse(take(s));
  CHECK(pr["P_A"] == "5/8");
  CHECK(pr["cov"] == "-1/64");

  REQUIRE(opl_counts_to_json(c, &s) == OPL_OK);
  const std::string text = take(s);
  CHECK(json::parse(text)["N_A"] == json::array({"0", "1", "5", "5"}));
  opl_counts* back = nullptr;
  REQUIRE(opl_counts_from_json(text.c_str(), &back) == OPL_OK);
  CHECK(opl_counts_n(back) == 3);
  opl_counts_free(back);
  CHECK(opl_counts_from_json("{\"n\":3}", &back) != OPL_OK);

  opl_poly* poly = nullptr;
  REQUIRE(opl_poly_from_counts(c, &poly) == OPL_OK);
  CHECK(opl_poly_degree(poly) <= 6);
  REQUIRE(opl_poly_eval(poly, "1", &s) == OPL_OK);
  CHECK(take(s) == "-1/64");
  REQUIRE(opl_poly_roots(poly, "0", "1", "1/1000000", 1000, &s) == OPL_OK);
  CHECK(json::parse(take(s)).empty());
  CHECK(opl_poly_roots(poly, "1", "0", "1/1000000", 1000, &s) == OPL_ERR_PARAMETER);
  opl_poly_free(poly);
  opl_counts_free(c);

  CHECK(opl_counts_enumerate(9, opl_default_budget(), 1, &c) == OPL_ERR_BUDGET);
  CHECK(std::string(opl_last_error()).find("3^36") != std::string::npos);
}

TEST_CASE("cached counts") {
  const auto dir = (std::filesystem::temp_directory_path() / "opl_capi_cache").string();
  std::filesystem::remove_all(dir);
  opl_counts* c = nullptr;
  int hit = -1;
  REQUIRE(opl_counts_cached(4, opl_default_budget(), 1, dir.c_str(), &hit, &c) == OPL_OK);
  CHECK(hit == 0);
  opl_counts_free(c);
  REQUIRE(opl_counts_cached(4, opl_default_budget(), 1, dir.c_str(), &hit, &c) == OPL_OK);
  CHECK(hit == 1);
  opl_counts_free(c);
  std::filesystem::remove_all(dir);
}

TEST_CASE("percolation and pairs") {
  char* s = nullptr;
  REQUIRE(opl_percolation_prob(3, "1/2", 0, 2, opl_default_budget(), &s) == OPL_OK);
  CHECK(take(s) == "5/8");
  char* csv = nullptr;
  REQUIRE(opl_pairsum(4, 3, "1/2", 1, &s, &csv) == OPL_OK);
  auto doc = json::parse(take(s));
  CHECK(doc["L"] == 3);
  CHECK(take(csv).rfind("variant,parameters,pairs,subtotal", 0) == 0);
  REQUIRE(opl_count_type1(5, 0, 1, &s) == OPL_OK);
  CHECK(take(s) == "1");
  REQUIRE(opl_count_type2(3, 0, 0, 1, 1, 1, &s) == OPL_OK);
  CHECK(take(s) == "1");
  CHECK(opl_count_type1(5, 0, 0, &s) == OPL_ERR_PARAMETER);
  REQUIRE(opl_expected_paths(3, "1", 2, &s) == OPL_OK);
  CHECK(take(s) == "3/4");
  const int a[] = {0, 1, 2}, b[] = {2, 0, 1};
  REQUIRE(opl_classify_pair(a, 3, b, 3, &s) == OPL_OK);
  auto cls = json::parse(take(s));
  CHECK(cls["variant"] == "Type2");
  const int bad[] = {2, 1};
  CHECK(opl_classify_pair(bad, 2, b, 3, &s) == OPL_ERR_CONTRACT);
  CHECK(opl_default_cutoff(12) == 7);
}

TEST_CASE("asymptotics") {
  double c1 = 0, c2 = 0;
  REQUIRE(opl_find_c_roots(1e-12, &c1, &c2) == OPL_OK);
  CHECK(c1 == doctest::Approx(0.180827).epsilon(1e-5));
  CHECK(opl_quartic_discriminant() == -283);
  opl_asymptotic r{};
  REQUIRE(opl_main_formula(0.5, 10, &r) == OPL_OK);
  CHECK(r.value == doctest::Approx(3.25e-3));
  CHECK(opl_main_formula(1.5, 10, &r) == OPL_ERR_PARAMETER);
  double t1 = 0, t2 = 0;
  REQUIRE(opl_truncated_series(0.3, 1, &t1, &t2) == OPL_OK);
  CHECK(t2 == doctest::Approx(0.027));
  CHECK(opl_quartic(0) == -1);
}

TEST_CASE("monte carlo through the API") {
  opl_rng rng{3, 1, 0};
  char* s = nullptr;
  REQUIRE(opl_mc_estimate(4, "1/2", 5000, &rng, 1, &s) == OPL_OK);
  CHECK(rng.position == 5000);
  auto e = json::parse(take(s));
  CHECK(e["samples"] == 5000);
  CHECK(e["seed"] == 3);
  opl_rng again{3, 1, 0};
  REQUIRE(opl_mc_estimate(4, "1/2", 5000, &again, 2, &s) == OPL_OK);
  auto f = json::parse(take(s));
  CHECK(f["cov_hat"] == e["cov_hat"]);
  CHECK(f["std_err"] == e["std_err"]);
  CHECK(opl_mc_estimate(4, "1/2", 10, &rng, 1, &s) == OPL_ERR_PARAMETER);

  const char* grid[] = {"1/10", "1/2"};
  REQUIRE(opl_mc_scan(4, grid, 2, 2000, &rng, 1, &s) == OPL_OK);
  CHECK(json::parse(take(s))["rows"].size() == 2);
  REQUIRE(opl_locate_sign_change(4, "3/10", "7/10", 100000, &rng, 1, &s) == OPL_OK);
  auto loc = json::parse(take(s));
  CHECK(loc["determined"] == false);
  CHECK(loc["p_lo"].is_null());
}
