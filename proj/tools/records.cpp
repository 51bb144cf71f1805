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
#include "records.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace opl::cli {

nlohmann::json RunRecord::to_json() const {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"params", params},
          {"result", result},
          {"seed", seed},
          {"timestamp", timestamp},
          {"version", version}};
}

RunRecord RunRecord::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::runtime_error("record is not an object");
  if (doc.value("schema_version", 0) != kSchemaVersion) throw std::runtime_error("unsupported schema_version");
  for (const char* field : {"command", "params", "result", "seed", "timestamp", "version"}) {
    if (!doc.contains(field)) throw std::runtime_error(std::string("record lacks field ") + field);
  }
  RunRecord r;
  r.command = doc.at("command").get<std::string>();
  r.params = doc.at("params");
  r.result = doc.at("result");
  r.seed = doc.at("seed");
  r.timestamp = doc.at("timestamp").get<std::string>();
  r.version = doc.at("version").get<std::string>();
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void append_record(const std::filesystem::path& path, const RunRecord& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::string line = record.to_json().dump() + "\n";
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open run log " + path.string());
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) throw std::runtime_error("cannot append to run log " + path.string());
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read run log " + path.string());
  std::vector<RunRecord> out;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    try {
      out.push_back(RunRecord::from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

namespace {

std::string str(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string headline(const RunRecord& r) {
  const auto& res = r.result;
  auto get = [&](const char* key) { return res.contains(key) ? str(res[key]) : std::string("?"); };
  if (r.command == "exact") return res.contains("cov") ? "cov = " + get("cov") : "counts for m = " + get("m");
  if (r.command == "poly") return "degree " + get("degree");
  if (r.command == "roots") {
    if (res.contains("c1")) return "c1 = " + get("c1") + ", c2 = " + get("c2");
    return std::to_string(res.value("brackets", nlohmann::json::array()).size()) + " sign change(s)";
  }
  if (r.command == "pairs") return "total = " + get("total");
  if (r.command == "asym") return "value = " + get("value");
  if (r.command == "mc") return "cov_hat = " + get("cov_hat") + " +- " + get("std_err");
  if (r.command == "scan") return std::to_string(res.value("rows", nlohmann::json::array()).size()) + " rows";
  if (r.command == "locate") {
    return res.value("determined", false) ? "bracket [" + get("p_lo") + ", " + get("p_hi") + "]" : "undetermined";
  }
  return "";
}

std::string param_summary(const nlohmann::json& params) {
  std::string out;
  for (const char* key : {"n", "p", "c", "L", "samples"}) {
    if (!params.contains(key) || params[key].is_null()) continue;
    if (!out.empty()) out += ' ';
    out += std::string(key) + "=" + str(params[key]);
  }
  return out;
}

}  // namespace

void write_summary(std::ostream& out, const std::vector<RunRecord>& records) {
  std::map<std::string, int> tally;
  out << std::left << std::setw(22) << "timestamp" << std::setw(8) << "command" << std::setw(34) << "params"
      << "result\n";
  for (const auto& r : records) {
    ++tally[r.command];
    out << std::left << std::setw(22) << r.timestamp << std::setw(8) << r.command << std::setw(34)
        << param_summary(r.params) << headline(r) << '\n';
  }
  out << "\n" << records.size() << " record(s)";
  for (const auto& [command, count] : tally) out << ", " << command << ": " << count;
  out << '\n';
}

}  // namespace opl::cli
