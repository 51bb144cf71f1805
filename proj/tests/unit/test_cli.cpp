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
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "records.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("opl_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(const Sandbox& box, std::vector<std::string> args, bool with_defaults = true) {
  if (with_defaults && !args.empty() && args[0] != "report") {
    args.insert(args.end(), {"--out", box.path("runs.jsonl")});
    if (args[0] == "exact" || args[0] == "poly" || args[0] == "roots") args.insert(args.end(), {"--cache", box.path("cache")});
  }
  std::ostringstream out, err;
  const int code = opl::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("exact n = 3, p = 1") {
  Sandbox box;
  auto r = run(box, {"exact", "--n", "3", "--p", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("cov = -1/64") != std::string::npos);
  CHECK(r.out.find("P_A = 5/8") != std::string::npos);
  auto records = opl::cli::read_records(box.path("runs.jsonl"));
  REQUIRE(records.size() == 1);
  CHECK(records[0].command == "exact");
  CHECK(records[0].result["cov"] == "-1/64");
  CHECK(records[0].to_json()["schema_version"] == 1);
  CHECK(fs::exists(box.path("cache") + "/counts_n3.json"));
}

TEST_CASE("budget refusal exits 3") {
  Sandbox box;
  auto r = run(box, {"exact", "--n", "9"});
  CHECK(r.code == 3);
  CHECK(r.err.find("3^36") != std::string::npos);
}

TEST_CASE("parameter errors exit 2") {
  Sandbox box;
  CHECK(run(box, {"frobnicate"}).code == 2);
  CHECK(run(box, {}).code == 2);
  auto unknown = run(box, {"nope"});
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run(box, {"exact", "--n", "4", "--p", "3/2"}).code == 2);
  CHECK(run(box, {"exact", "--n", "4", "--p", "abc"}).code == 2);
  CHECK(run(box, {"mc", "--n", "4", "--p", "1/2", "--samples", "10"}).code == 2);
  CHECK(run(box, {"asym", "--c", "1.2", "--n", "10"}).code == 2);
  CHECK(run(box, {"mc", "--n", "4"}).code == 2);
  CHECK(run(box, {"exact", "--n", "4", "--p", "1/2", "--c", "1/2"}).code == 2);
}

TEST_CASE("roots") {
  Sandbox box;
  auto a = run(box, {"roots", "--asymptotic"});
  CHECK(a.code == 0);
  CHECK(a.out.find("c1 = 0.180827") != std::string::npos);
  CHECK(a.out.find("c2 = 2.38027") != std::string::npos);
  CHECK(a.out.find("-283") != std::string::npos);
  auto e = run(box, {"roots", "--n", "3"});
  CHECK(e.code == 0);
  CHECK(e.out.find("0 sign change") != std::string::npos);
  CHECK(run(box, {"roots"}).code == 2);
}

TEST_CASE("exact commands are reproducible and reuse the cache") {
  Sandbox box;
  auto first = run(box, {"poly", "--n", "5"});
  auto second = run(box, {"poly", "--n", "5"});
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
  auto r1 = run(box, {"roots", "--n", "5"});
  auto r2 = run(box, {"roots", "--n", "5", "--threads", "3"});
  CHECK(r1.out == r2.out);
  CHECK(r1.out.find("1 sign change") != std::string::npos);
}

TEST_CASE("cache directory from the environment") {
  Sandbox box;
  ::setenv("OPL_CACHE", box.path("envcache").c_str(), 1);
  auto r = run(box, {"exact", "--n", "3", "--out", box.path("runs.jsonl")}, false);
  ::unsetenv("OPL_CACHE");
  CHECK(r.code == 0);
  CHECK(fs::exists(box.path("envcache") + "/counts_n3.json"));
}

TEST_CASE("pairs csv") {
  Sandbox box;
  auto r = run(box, {"pairs", "--n", "4", "--L", "3", "--p", "1/2", "--csv", box.path("pairs.csv")});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("variant,parameters,pairs,subtotal", 0) == 0);
  CHECK(lines(box.path("pairs.csv")).size() > 2);
  auto s = run(box, {"pairs", "--n", "5", "--c", "0.4", "--summary"});
  CHECK(s.out.find("total = ") != std::string::npos);
}

TEST_CASE("asym") {
  Sandbox box;
  auto r = run(box, {"asym", "--c", "0.5", "--n", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("value = 0.00325") != std::string::npos);
  CHECK(r.out.find("type1 = -0.00075") != std::string::npos);
}

TEST_CASE("mc and scan are reproducible and write csv") {
  Sandbox box;
  auto a = run(box, {"mc", "--n", "5", "--p", "2/5", "--samples", "20000", "--seed", "9", "--csv", box.path("mc.csv")});
  auto b = run(box, {"mc", "--n", "5", "--p", "2/5", "--samples", "20000", "--seed", "9"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto rows = lines(box.path("mc.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "n,p,samples,pA_hat,pB_hat,pAB_hat,cov_hat,std_err,seed");

  auto s1 = run(box, {"scan", "--n", "5", "--grid", "1/10:9/10:5", "--samples", "5000", "--seed", "4"});
  auto s2 = run(box, {"scan", "--n", "5", "--grid", "0.1,0.3,0.5,0.7,0.9", "--samples", "5000", "--seed", "4",
                      "--threads", "2"});
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
  std::istringstream in(s1.out);
  int count = 0;
  for (std::string line; std::getline(in, line);) ++count;
  CHECK(count == 6);
  CHECK(run(box, {"scan", "--n", "5", "--grid", "0.5,0.1", "--samples", "5000"}).code == 2);
}

TEST_CASE("locate") {
  Sandbox box;
  auto r = run(box, {"locate", "--n", "4", "--lo", "0.3", "--hi", "0.7", "--budget", "100000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("undetermined") != std::string::npos);
}

TEST_CASE("report round-trips every record") {
  Sandbox box;
  run(box, {"exact", "--n", "3", "--p", "1/2"});
  run(box, {"asym", "--c", "0.1", "--n", "20"});
  run(box, {"mc", "--n", "4", "--p", "1/2", "--samples", "2000"});
  run(box, {"roots", "--asymptotic"});
  const auto original = lines(box.path("runs.jsonl"));
  REQUIRE(original.size() == 4);
  auto rep = run(box, {"report", box.path("runs.jsonl"), "--json"});
  CHECK(rep.code == 0);
  std::istringstream in(rep.out);
  std::size_t i = 0;
  for (std::string line; std::getline(in, line); ++i) {
    REQUIRE(i < original.size());
    CHECK(json::parse(line) == json::parse(original[i]));
  }
  CHECK(i == original.size());
  auto table = run(box, {"report", box.path("runs.jsonl")});
  CHECK(table.out.find("4 record(s)") != std::string::npos);
  CHECK(run(box, {"report", box.path("missing.jsonl")}).code == 4);
  std::ofstream(box.path("bad.jsonl")) << "{not json\n";
  CHECK(run(box, {"report", box.path("bad.jsonl")}).code == 4);
}

TEST_CASE("records") {
  opl::cli::RunRecord r;
  r.command = "x";
  r.params = {{"n", 3}};
  r.result = {{"v", "1/2"}};
  r.timestamp = opl::cli::utc_timestamp();
  r.version = "1";
  CHECK(r.timestamp.back() == 'Z');
  auto back = opl::cli::RunRecord::from_json(r.to_json());
  CHECK(back.to_json() == r.to_json());
  auto bad = r.to_json();
  bad["schema_version"] = 2;
  CHECK_THROWS(opl::cli::RunRecord::from_json(bad));
}
