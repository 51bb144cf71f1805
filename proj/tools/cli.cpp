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
#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "opl/opl.h"
#include "records.hpp"

namespace opl::cli {
namespace {

using nlohmann::json;

// Failure carrying the exit code it maps to.
struct CommandError : std::runtime_error {
  CommandError(int code_in, const std::string& what) : std::runtime_error(what), code(code_in) {}
  int code;
};

int exit_code_for(opl_status status) {
  switch (status) {
    case OPL_OK: return kExitOk;
    case OPL_ERR_PARAMETER:
    case OPL_ERR_CONTRACT: return kExitParameter;
    case OPL_ERR_BUDGET: return kExitBudget;
    case OPL_ERR_IO: return kExitIo;
    case OPL_ERR_INTERNAL: break;
  }
  return kExitFailure;
}

void check(opl_status status) {
  if (status != OPL_OK) throw CommandError(exit_code_for(status), opl_last_error());
}

struct StringDeleter {
  void operator()(char* s) const { opl_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

// Calls an API function that hands back one library-owned string.
template <class F>
std::string take(F&& call) {
  char* raw = nullptr;
  check(call(&raw));
  OwnedString owned(raw);
  return std::string(owned.get());
}

double to_double(const std::string& rational) {
  double d = 0;
  check(opl_rational_to_double(rational.c_str(), &d));
  return d;
}

std::string fmt(double x, int digits = 10) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

struct CountsDeleter {
  void operator()(opl_counts* c) const { opl_counts_free(c); }
};
struct PolyDeleter {
  void operator()(opl_poly* p) const { opl_poly_free(p); }
};

struct Common {
  std::string out = "opl_runs.jsonl";
  std::string cache;
  unsigned threads = 0;
  bool deep = false;

  std::string cache_dir() const {
    if (!cache.empty()) return cache;
    if (const char* env = std::getenv("OPL_CACHE"); env && *env) return env;
    return ".opl_cache";
  }
  std::uint64_t budget() const { return deep ? opl_deep_budget() : opl_default_budget(); }
};

struct Options {
  Common common;
  int n = 0;
  std::string p, c;
  int L = 0;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::uint32_t stream = 0;
  std::string lo = "0", hi = "1", tol = "1/1000000000000";
  unsigned grid_points = 10000;
  std::string grid;
  std::uint64_t budget = 1000000;
  bool asymptotic = false;
  double c_real = 0;
  std::string csv;
  bool summary = false;
  bool as_json = false;
  std::vector<std::string> inputs;
};

// Resolves --p / --c into an exact p; exactly one must be present.
std::string resolve_p(const Options& o, bool required) {
  if (!o.p.empty() && !o.c.empty()) throw CommandError(kExitParameter, "give either --p or --c, not both");
  if (!o.p.empty()) return take([&](char** s) { return opl_rational_canonical(o.p.c_str(), s); });
  if (!o.c.empty()) return take([&](char** s) { return opl_scaled_p(o.c.c_str(), o.n, s); });
  if (required) throw CommandError(kExitParameter, "one of --p or --c is required");
  return {};
}

json base_params(const Options& o) {
  return {{"threads", o.common.threads}, {"deep", o.common.deep}};
}

std::unique_ptr<opl_counts, CountsDeleter> load_counts(const Options& o, json& params) {
  opl_counts* raw = nullptr;
  int hit = 0;
  const std::string dir = o.common.cache_dir();
  check(opl_counts_cached(o.n, o.common.budget(), o.common.threads, dir.c_str(), &hit, &raw));
  params["cache"] = dir;
  return std::unique_ptr<opl_counts, CountsDeleter>(raw);
}

RunRecord make_record(const std::string& command, json params, json result, json seed = nullptr) {
  RunRecord r;
  r.command = command;
  r.params = std::move(params);
  r.result = std::move(result);
  r.seed = std::move(seed);
  r.timestamp = utc_timestamp();
  r.version = opl_version();
  return r;
}

RunRecord cmd_exact(const Options& o, std::ostream& out) {
  json params = base_params(o);
  params["n"] = o.n;
  const std::string p = resolve_p(o, false);
  if (!o.c.empty()) params["c"] = o.c;
  auto counts = load_counts(o, params);
  json result = json::parse(take([&](char** s) { return opl_counts_to_json(counts.get(), s); }));
  out << "n = " << o.n << "\n";
  if (p.empty()) {
    out << "k N_A N_B N_AB\n";
    for (std::size_t k = 0; k < result["N_A"].size(); ++k) {
      out << k << ' ' << result["N_A"][k].get<std::string>() << ' ' << result["N_B"][k].get<std::string>() << ' '
          << result["N_AB"][k].get<std::string>() << '\n';
    }
  } else {
    params["p"] = p;
    const json prob = json::parse(take([&](char** s) { return opl_counts_probabilities(counts.get(), p.c_str(), s); }));
    for (const char* key : {"p", "P_A", "P_B", "P_AB", "cov"}) {
      const std::string v = prob[key].get<std::string>();
      out << key << " = " << v << "  (" << fmt(to_double(v), 12) << ")\n";
      result[key] = v;
    }
  }
  return make_record("exact", params, result);
}

RunRecord cmd_poly(const Options& o, std::ostream& out) {
  json params = base_params(o);
  params["n"] = o.n;
  auto counts = load_counts(o, params);
  opl_poly* raw = nullptr;
  check(opl_poly_from_counts(counts.get(), &raw));
  std::unique_ptr<opl_poly, PolyDeleter> poly(raw);
  const json coeffs = json::parse(take([&](char** s) { return opl_poly_coefficients(poly.get(), s); }));
  out << "Cov(p) for n = " << o.n << ", degree " << opl_poly_degree(poly.get()) << "\n";
  for (std::size_t d = 0; d < coeffs.size(); ++d) out << "p^" << d << "  " << coeffs[d].get<std::string>() << "\n";
  return make_record("poly", params, {{"degree", opl_poly_degree(poly.get())}, {"coefficients", coeffs}});
}

RunRecord cmd_roots(const Options& o, std::ostream& out) {
  json params = base_params(o);
  params["asymptotic"] = o.asymptotic;
  if (o.asymptotic) {
    double c1 = 0, c2 = 0;
    check(opl_find_c_roots(1e-12, &c1, &c2));
    const auto disc = opl_quartic_discriminant();
    out << std::setprecision(12) << "c1 = " << c1 << "\nc2 = " << c2 << "\ndiscriminant = " << disc
        << "\nfirst critical p ~ " << 2 * c1 << " / n\n";
    return make_record("roots", params, {{"c1", c1}, {"c2", c2}, {"discriminant", disc}, {"C1", 2 * c1}});
  }
  if (o.n == 0) throw CommandError(kExitParameter, "roots needs --n (or --asymptotic)");
  params["n"] = o.n;
  params["lo"] = o.lo;
  params["hi"] = o.hi;
  params["tol"] = o.tol;
  params["grid"] = o.grid_points;
  auto counts = load_counts(o, params);
  opl_poly* raw = nullptr;
  check(opl_poly_from_counts(counts.get(), &raw));
  std::unique_ptr<opl_poly, PolyDeleter> poly(raw);
  const json brackets = json::parse(take([&](char** s) {
    return opl_poly_roots(poly.get(), o.lo.c_str(), o.hi.c_str(), o.tol.c_str(), o.grid_points, s);
  }));
  out << brackets.size() << " sign change(s) of Cov(p) for n = " << o.n << " in [" << o.lo << ", " << o.hi << "]\n";
  for (const auto& b : brackets) {
    out << "[" << fmt(b["lo_float"].get<double>(), 15) << ", " << fmt(b["hi_float"].get<double>(), 15) << "]  "
        << b["lo"].get<std::string>() << " .. " << b["hi"].get<std::string>() << "\n";
  }
  return make_record("roots", params, {{"brackets", brackets}});
}

RunRecord cmd_pairs(const Options& o, std::ostream& out) {
  json params = base_params(o);
  params["n"] = o.n;
  const std::string p = resolve_p(o, true);
  params["p"] = p;
  if (!o.c.empty()) params["c"] = o.c;
  const int L = o.L > 0 ? o.L : opl_default_cutoff(o.n);
  params["L"] = L;
  char* raw_json = nullptr;
  char* raw_csv = nullptr;
  check(opl_pairsum(o.n, L, p.c_str(), o.common.threads, &raw_json, &raw_csv));
  OwnedString js(raw_json), csv(raw_csv);
  json result = json::parse(js.get());
  if (!o.csv.empty()) {
    std::ofstream f(o.csv);
    if (!f) throw CommandError(kExitIo, "cannot write " + o.csv);
    f << csv.get();
    params["csv"] = o.csv;
  }
  if (o.summary) {
    out << "total = " << result["total"].get<std::string>() << "  (" << fmt(result["total_float"].get<double>(), 12)
        << ")\n";
    for (const auto& [variant, value] : result["by_class"].items()) {
      out << variant << " = " << value.get<std::string>() << "  pairs " << result["pairs_by_class"][variant].get<std::string>()
          << "\n";
    }
  } else {
    out << csv.get();
  }
  return make_record("pairs", params, result);
}

RunRecord cmd_asym(const Options& o, std::ostream& out) {
  json params = base_params(o);
  params["c"] = o.c_real;
  params["n"] = o.n;
  opl_asymptotic r{};
  check(opl_main_formula(o.c_real, o.n, &r));
  out << std::setprecision(15) << "value = " << r.value << "\ntype1 = " << r.type1 << "\ntype2 = " << r.type2
      << "\nn^3 * value = " << r.value * o.n * o.n * o.n << "\n";
  return make_record("asym", params,
                     {{"value", r.value}, {"type1", r.type1}, {"type2", r.type2},
                      {"leading_factor", r.value * o.n * o.n * o.n}});
}

const char* kCsvHeader = "n,p,samples,pA_hat,pB_hat,pAB_hat,cov_hat,std_err,seed";

std::string csv_row(const json& e) {
  std::ostringstream os;
  os << std::setprecision(17) << e["n"].get<int>() << ',' << e["p_float"].get<double>() << ','
     << e["samples"].get<std::uint64_t>() << ',' << e["pA_hat"].get<double>() << ',' << e["pB_hat"].get<double>()
     << ',' << e["pAB_hat"].get<double>() << ',' << e["cov_hat"].get<double>() << ',' << e["std_err"].get<double>()
     << ',' << e["seed"].get<std::uint64_t>();
  return os.str();
}

void append_csv(const std::string& path, const std::vector<json>& rows) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw CommandError(kExitIo, "cannot write " + path);
  if (fresh) f << kCsvHeader << '\n';
  for (const auto& r : rows) f << csv_row(r) << '\n';
}

json seed_info(const Options& o) { return {{"seed", o.seed}, {"stream", o.stream}}; }

RunRecord cmd_mc(const Options& o, std::ostream& out) {
  json params = base_params(o);
  params["n"] = o.n;
  const std::string p = resolve_p(o, true);
  params["p"] = p;
  if (!o.c.empty()) params["c"] = o.c;
  params["samples"] = o.samples;
  opl_rng rng{o.seed, o.stream, 0};
  json est = json::parse(
      take([&](char** s) { return opl_mc_estimate(o.n, p.c_str(), o.samples, &rng, o.common.threads, s); }));
  out << std::setprecision(10) << "n = " << o.n << ", p = " << p << ", samples = " << o.samples << "\n"
      << "pA_hat = " << est["pA_hat"].get<double>() << "\npB_hat = " << est["pB_hat"].get<double>()
      << "\npAB_hat = " << est["pAB_hat"].get<double>() << "\ncov_hat = " << est["cov_hat"].get<double>()
      << " +- " << est["std_err"].get<double>() << "\n";
  if (!o.csv.empty()) {
    append_csv(o.csv, {est});
    params["csv"] = o.csv;
  }
  return make_record("mc", params, est, seed_info(o));
}

// "a,b,c" or "lo:hi:points" (inclusive, evenly spaced, exact).
std::vector<std::string> parse_grid(const std::string& text) {
  std::vector<std::string> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw CommandError(kExitParameter, "grid range must be lo:hi:points");
    long points = 0;
    try {
      points = std::stol(parts[2]);
    } catch (const std::exception&) {
      throw CommandError(kExitParameter, "grid point count must be an integer");
    }
    if (points < 1) throw CommandError(kExitParameter, "grid needs at least one point");
    if (points == 1) return {take([&](char** s) { return opl_rational_canonical(parts[0].c_str(), s); })};
    for (long t = 0; t < points; ++t) {
      out.push_back(take([&](char** s) {
        return opl_rational_lerp(parts[0].c_str(), parts[1].c_str(), static_cast<std::uint64_t>(t),
                                 static_cast<std::uint64_t>(points - 1), s);
      }));
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    out.push_back(take([&](char** s) { return opl_rational_canonical(part.c_str(), s); }));
  }
  if (out.empty()) throw CommandError(kExitParameter, "empty grid");
  return out;
}

RunRecord cmd_scan(const Options& o, std::ostream& out) {
  json params = base_params(o);
  params["n"] = o.n;
  params["grid"] = o.grid;
  params["samples"] = o.samples;
  const auto grid = parse_grid(o.grid);
  std::vector<const char*> ptrs;
  for (const auto& g : grid) ptrs.push_back(g.c_str());
  const opl_rng rng{o.seed, o.stream, 0};
  json curve = json::parse(take([&](char** s) {
    return opl_mc_scan(o.n, ptrs.data(), ptrs.size(), o.samples, &rng, o.common.threads, s);
  }));
  out << kCsvHeader << '\n';
  std::vector<json> rows;
  for (const auto& row : curve["rows"]) {
    out << csv_row(row) << '\n';
    rows.push_back(row);
  }
  if (!o.csv.empty()) {
    append_csv(o.csv, rows);
    params["csv"] = o.csv;
  }
  return make_record("scan", params, curve, seed_info(o));
}

RunRecord cmd_locate(const Options& o, std::ostream& out) {
  json params = base_params(o);
  params["n"] = o.n;
  params["lo"] = o.lo;
  params["hi"] = o.hi;
  params["budget"] = o.budget;
  const opl_rng rng{o.seed, o.stream, 0};
  json found = json::parse(take([&](char** s) {
    return opl_locate_sign_change(o.n, o.lo.c_str(), o.hi.c_str(), o.budget, &rng, o.common.threads, s);
  }));
  if (found["determined"].get<bool>()) {
    out << "sign change in [" << found["p_lo"].get<std::string>() << ", " << found["p_hi"].get<std::string>()
        << "]  ([" << fmt(to_double(found["p_lo"].get<std::string>())) << ", "
        << fmt(to_double(found["p_hi"].get<std::string>())) << "]), confidence " << fmt(found["confidence"].get<double>(), 6)
        << "\n";
  } else {
    out << "undetermined\n";
  }
  out << "samples used " << found["samples_used"].get<std::uint64_t>() << " of " << o.budget << "\n";
  return make_record("locate", params, found, seed_info(o));
}

int cmd_report(const Options& o, std::ostream& out) {
  std::vector<RunRecord> all;
  const auto inputs = o.inputs.empty() ? std::vector<std::string>{o.common.out} : o.inputs;
  for (const auto& path : inputs) {
    try {
      auto records = read_records(path);
      all.insert(all.end(), records.begin(), records.end());
    } catch (const std::exception& e) {
      throw CommandError(kExitIo, e.what());
    }
  }
  if (o.as_json) {
    for (const auto& r : all) out << r.to_json().dump() << '\n';
  } else {
    write_summary(out, all);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Covariance of {a->s} and {s->b} in randomly oriented G(n,p)", "opl"};
  app.require_subcommand(1, 1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.common.out, "JSON-lines run log to append to");
    sub->add_option("--threads", o.common.threads, "worker threads (0 = hardware)");
  };
  auto add_exact_common = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--cache", o.common.cache, "counts cache directory (default $OPL_CACHE or .opl_cache)");
    sub->add_flag("--deep", o.common.deep, "raise the enumeration budget to 3^21 (n = 7)");
  };
  auto add_p = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "edge probability (a/b or decimal)");
    sub->add_option("--c", o.c, "scaled parameter, p = 2c/n");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "generator seed");
    sub->add_option("--stream", o.stream, "generator stream id");
  };

  auto* exact = app.add_subcommand("exact", "exact probabilities and covariance by enumeration");
  exact->add_option("--n", o.n, "vertex count")->required();
  add_p(exact);
  add_exact_common(exact);

  auto* poly = app.add_subcommand("poly", "coefficients of Cov(p) for fixed n");
  poly->add_option("--n", o.n, "vertex count")->required();
  add_exact_common(poly);

  auto* roots = app.add_subcommand("roots", "sign changes of Cov(p), or the asymptotic constants");
  roots->add_option("--n", o.n, "vertex count");
  roots->add_flag("--asymptotic", o.asymptotic, "print c1, c2 of the leading-order formula");
  roots->add_option("--lo", o.lo, "interval start");
  roots->add_option("--hi", o.hi, "interval end");
  roots->add_option("--tol", o.tol, "bracket width");
  roots->add_option("--grid", o.grid_points, "scan points");
  add_exact_common(roots);

  auto* pairs = app.add_subcommand("pairs", "path-pair covariance breakdown (CSV)");
  pairs->add_option("--n", o.n, "vertex count")->required();
  pairs->add_option("--L", o.L, "cut-off length (default ceil(ln(n)^2))");
  add_p(pairs);
  pairs->add_option("--csv", o.csv, "also write the CSV here");
  pairs->add_flag("--summary", o.summary, "print class totals instead of CSV rows");
  add_common(pairs);

  auto* asym = app.add_subcommand("asym", "leading-order covariance and its breakdown");
  asym->add_option("--c", o.c_real, "scaled parameter, 0 <= c < 1")->required();
  asym->add_option("--n", o.n, "vertex count")->required();
  add_common(asym);

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate at one p");
  mc->add_option("--n", o.n, "vertex count")->required();
  add_p(mc);
  mc->add_option("--samples", o.samples, "number of samples");
  mc->add_option("--csv", o.csv, "append a CSV row here");
  add_seed(mc);
  add_common(mc);

  auto* scan = app.add_subcommand("scan", "Monte Carlo estimates over a grid of p");
  scan->add_option("--n", o.n, "vertex count")->required();
  scan->add_option("--grid", o.grid, "p values: a,b,c or lo:hi:points")->required();
  scan->add_option("--samples", o.samples, "samples per grid point");
  scan->add_option("--csv", o.csv, "append CSV rows here");
  add_seed(scan);
  add_common(scan);

  auto* locate = app.add_subcommand("locate", "adaptive Monte Carlo search for a sign change");
  locate->add_option("--n", o.n, "vertex count")->required();
  locate->add_option("--lo", o.lo, "interval start")->required();
  locate->add_option("--hi", o.hi, "interval end")->required();
  locate->add_option("--budget", o.budget, "total samples");
  add_seed(locate);
  add_common(locate);

  auto* report = app.add_subcommand("report", "summarise JSON-lines run logs");
  report->add_option("inputs", o.inputs, "run logs (default opl_runs.jsonl)");
  report->add_option("--out", o.common.out, "default run log when no inputs are given");
  report->add_flag("--json", o.as_json, "re-emit the records instead of a table");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitParameter;
  }

  try {
    if (report->parsed()) return cmd_report(o, out);
    std::optional<RunRecord> record;
    if (exact->parsed()) record = cmd_exact(o, out);
    if (poly->parsed()) record = cmd_poly(o, out);
    if (roots->parsed()) record = cmd_roots(o, out);
    if (pairs->parsed()) record = cmd_pairs(o, out);
    if (asym->parsed()) record = cmd_asym(o, out);
    if (mc->parsed()) record = cmd_mc(o, out);
    if (scan->parsed()) record = cmd_scan(o, out);
    if (locate->parsed()) record = cmd_locate(o, out);
    if (record && !o.common.out.empty()) append_record(o.common.out, *record);
    return kExitOk;
  } catch (const CommandError& e) {
    err << "error: " << e.what() << "\n";
    return e.code;
  } catch (const json::exception& e) {
    err << "error: malformed library output: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace opl::cli
