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

// The acceptance suite. Criteria 1-12 are numerical checks with pinned
// tolerances; criterion 13 reruns the whole suite and compares the emitted
// files byte for byte.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddm/report.hpp"

namespace ddm {

inline constexpr int kCriteriaCount = 13;

struct ReproduceOptions {
  std::uint64_t seed = 1;
  /// Multiplies every numerical tolerance. 0 makes every check exact.
  double tolerance_scale = 1.0;
  std::size_t threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Key measurements, deterministic for a given seed.
  std::string detail;
  /// CSV table backing the verdict; empty for criterion 13.
  std::string table;
  double seconds = 0.0;
  /// Wall-clock limit in seconds, 0 when none applies.
  double time_limit = 0.0;
};

/// Runs one of criteria 1..12.
CriterionResult run_criterion(int id, const ReproduceOptions& opts);

struct ReproduceReport {
  std::vector<CriterionResult> criteria;  // all 13, in order
  RunOutput files;                        // tables, summary.csv, manifest.json
  bool all_passed = false;
};

ReproduceReport reproduce_paper(const ReproduceOptions& opts);

/// One "PASS|FAIL <id> <name>: <detail>" line per criterion.
std::string summary_text(const ReproduceReport& report);

}  // namespace ddm
