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
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "core/exact_engine.hpp"

namespace opl {

// {"n", "m", "N_A", "N_B", "N_AB"} with every count as a decimal string.
nlohmann::json counts_to_json(const CountsTable& counts);
// Inverse of counts_to_json; validates structure and invariants (kIo/kContract).
CountsTable counts_from_json(const nlohmann::json& doc);

// FNV-1a 64 over the compact dump of counts_to_json, as 16 hex digits.
std::string counts_checksum(const CountsTable& counts);

// On-disk cache of counts tables keyed by n: <dir>/counts_n<n>.json holding
// counts_to_json plus a "checksum" field.
class CountsCache {
 public:
  explicit CountsCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(int n) const;

  // Empty if missing, unreadable, or failing checksum/invariant validation.
  std::optional<CountsTable> load(int n) const;
  void store(const CountsTable& counts) const;

  struct Lookup {
    CountsTable counts;
    bool from_cache = false;
  };
  Lookup load_or_enumerate(int n, std::uint64_t budget, unsigned threads) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace opl
