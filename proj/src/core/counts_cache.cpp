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
#include "core/counts_cache.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "core/graph_model.hpp"

namespace opl {
namespace {

std::vector<BigInt> read_counts(const nlohmann::json& doc, const char* key, std::size_t m) {
  if (!doc.contains(key) || !doc[key].is_array()) throw Error(ErrorKind::kIo, std::string("missing array ") + key);
  const auto& arr = doc[key];
  if (arr.size() != m + 1) throw Error(ErrorKind::kIo, std::string("wrong length for ") + key);
  std::vector<BigInt> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string()) throw Error(ErrorKind::kIo, std::string("counts must be decimal strings in ") + key);
    BigInt z;
    if (z.set_str(v.get<std::string>(), 10) != 0) throw Error(ErrorKind::kIo, "bad integer in counts");
    out.push_back(z);
  }
  return out;
}

nlohmann::json string_array(const std::vector<BigInt>& values) {
  auto arr = nlohmann::json::array();
  for (const auto& v : values) arr.push_back(v.get_str());
  return arr;
}

}  // namespace

nlohmann::json counts_to_json(const CountsTable& counts) {
  return {{"n", counts.n},
          {"m", counts.m},
          {"N_A", string_array(counts.a)},
          {"N_B", string_array(counts.b)},
          {"N_AB", string_array(counts.ab)}};
}

CountsTable counts_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("m") || !doc["n"].is_number_integer() ||
      !doc["m"].is_number_integer()) {
    throw Error(ErrorKind::kIo, "counts document needs integer fields n and m");
  }
  CountsTable counts;
  counts.n = doc["n"].get<int>();
  const auto m = doc["m"].get<long long>();
  if (counts.n < 3 || m < 0 || static_cast<std::size_t>(m) != pair_count(counts.n)) {
    throw Error(ErrorKind::kIo, "counts document has inconsistent n and m");
  }
  counts.m = static_cast<std::size_t>(m);
  counts.a = read_counts(doc, "N_A", counts.m);
  counts.b = read_counts(doc, "N_B", counts.m);
  counts.ab = read_counts(doc, "N_AB", counts.m);
  check_counts(counts);
  return counts;
}

std::string counts_checksum(const CountsTable& counts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : counts_to_json(counts).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::filesystem::path CountsCache::path_for(int n) const {
  return dir_ / ("counts_n" + std::to_string(n) + ".json");
}

std::optional<CountsTable> CountsCache::load(int n) const {
  std::ifstream in(path_for(n));
  if (!in) return std::nullopt;
  try {
    const auto doc = nlohmann::json::parse(in);
    CountsTable counts = counts_from_json(doc);
    if (counts.n != n || !doc.contains("checksum") || doc["checksum"] != counts_checksum(counts)) return std::nullopt;
    return counts;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
}

void CountsCache::store(const CountsTable& counts) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create cache directory " + dir_.string() + ": " + ec.message());
  auto doc = counts_to_json(counts);
  doc["checksum"] = counts_checksum(counts);
  // Write then rename so concurrent readers never see a partial file.
  const auto target = path_for(counts.n);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    out << doc.dump() << '\n';
    if (!out) throw Error(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot move cache file into place: " + ec.message());
}

CountsCache::Lookup CountsCache::load_or_enumerate(int n, std::uint64_t budget, unsigned threads) const {
  // Refusal must not depend on cache state.
  if (n < 3 || n > kMaxExactVertices) throw_parameter("exact computation needs 3 <= n <= 16");
  BigInt needed;
  mpz_ui_pow_ui(needed.get_mpz_t(), 3, pair_count(n));
  if (needed > BigInt(static_cast<unsigned long>(budget))) throw Error(ErrorKind::kBudget, budget_message(n, budget));
  if (auto cached = load(n)) return {std::move(*cached), true};
  CountsTable counts = enumerate_counts(n, budget, threads);
  store(counts);
  return {std::move(counts), false};
}

}  // namespace opl
