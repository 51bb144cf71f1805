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

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace opl::cli {

inline constexpr int kSchemaVersion = 1;

// One self-describing line of a JSON-lines run log.
struct RunRecord {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json result = nlohmann::json::object();
  nlohmann::json seed = nullptr;  // {"seed", "stream"} for sampled commands
  std::string timestamp;          // UTC, RFC 3339
  std::string version;

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& doc);
};

std::string utc_timestamp();

// Appends one line; the whole line goes out in a single write.
void append_record(const std::filesystem::path& path, const RunRecord& record);

// Reads every record of a JSON-lines file; throws std::runtime_error with
// the line number on malformed input.
std::vector<RunRecord> read_records(const std::filesystem::path& path);

// Human-readable table: one row per record and a per-command tally.
void write_summary(std::ostream& out, const std::vector<RunRecord>& records);

}  // namespace opl::cli
