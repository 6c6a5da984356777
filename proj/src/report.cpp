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

#include "ddm/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "ddm/error.hpp"

namespace ddm {

std::string format_number(double x) {
  require(!std::isnan(x), ErrorCode::invalid_argument, "refusing to format NaN");
  if (std::isinf(x)) return kUnboundedToken;
  if (x == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

nlohmann::json json_number(double x) {
  require(!std::isnan(x), ErrorCode::invalid_argument, "refusing to format NaN");
  if (std::isinf(x)) return kUnboundedToken;
  return std::strtod(format_number(x).c_str(), nullptr);
}

namespace {

nlohmann::json rounded(const nlohmann::json& j) {
  if (j.is_number_float()) return json_number(j.get<double>());
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(rounded(v));
    return out;
  }
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = rounded(it.value());
    return out;
  }
  return j;
}

}  // namespace

std::string dump_json(const nlohmann::json& j) { return rounded(j).dump(2) + "\n"; }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  require(cells.size() == header_.size(), ErrorCode::invalid_argument, "CSV row width differs from the header");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  auto line = [](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
    return out;
  };
  std::string out = line(header_);
  for (const auto& r : rows_) out += line(r);
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) == 1, ErrorCode::io,
          "SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string manifest_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0') now = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string build_manifest(const RunOutput& files, const std::string& scenario_hash,
                           std::optional<std::uint64_t> seed, const nlohmann::json& extra) {
  nlohmann::json j;
  j["tool"] = "ddm";
  j["version"] = DDM_VERSION_STRING;
  j["scenario_hash"] = scenario_hash;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  j["timestamp"] = manifest_timestamp();
  nlohmann::json outputs = nlohmann::json::object();
  for (const auto& f : files) outputs[f.name] = sha256_hex(f.content);
  j["outputs"] = outputs;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return dump_json(j);
}

void write_artifacts(const RunOutput& files, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::io, "cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& f : files) {
    std::ofstream out(dir / f.name, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::io, "cannot write " + (dir / f.name).string());
    out << f.content;
    require(static_cast<bool>(out), ErrorCode::io, "write failed for " + (dir / f.name).string());
  }
}

}  // namespace ddm
