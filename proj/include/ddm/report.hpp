// Copyright 2026 The DDM Authors
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

// Table and number formatting shared by every emitted artifact. Numbers use
// 12 significant digits so reruns are byte-identical; non-finite values are
// written as the token "unbounded".

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ddm {

inline constexpr const char* kUnboundedToken = "unbounded";

/// "%.12g"; +-inf becomes "unbounded". NaN is rejected.
std::string format_number(double x);
/// The value rounded to 12 significant digits, or "unbounded".
nlohmann::json json_number(double x);
/// dump(2) with every float rounded as json_number, plus a trailing newline.
std::string dump_json(const nlohmann::json& j);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);
  std::size_t size() const noexcept { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

struct Artifact {
  std::string name;
  std::string content;
};

using RunOutput = std::vector<Artifact>;

/// UTC timestamp, taken from SOURCE_DATE_EPOCH when that is set.
std::string manifest_timestamp();

/// {tool, version, scenario_hash, seed, timestamp, outputs: {name: sha256}}.
std::string build_manifest(const RunOutput& files, const std::string& scenario_hash,
                           std::optional<std::uint64_t> seed, const nlohmann::json& extra = nlohmann::json::object());

/// Writes every artifact into dir (created if missing).
void write_artifacts(const RunOutput& files, const std::filesystem::path& dir);

}  // namespace ddm
