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

// Runs every acceptance criterion at its pinned tolerance and prints one
// PASS/FAIL line each. Usage: ddm_acceptance [seed]

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "ddm/reproduce.hpp"

int main(int argc, char** argv) {
  ddm::ReproduceOptions opts;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);
  try {
    const ddm::ReproduceReport report = ddm::reproduce_paper(opts);
    for (const auto& c : report.criteria) {
      std::printf("%s %2d %s (%.2fs): %s\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), c.seconds,
                  c.detail.c_str());
    }
    std::printf("%s\n", report.all_passed ? "all criteria passed" : "some criteria failed");
    return report.all_passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ddm_acceptance: %s\n", e.what());
    return 2;
  }
}
