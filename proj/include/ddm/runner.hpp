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

// Scenario-driven commands. Each returns its artifacts in memory; the first
// file is the primary table, printed to stdout by the command-line tool.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddm/report.hpp"
#include "ddm/scenario.hpp"

namespace ddm {

enum class OutputFormat { csv, json };

struct RunOptions {
  OutputFormat format = OutputFormat::csv;
  std::size_t threads = 1;
  /// Overrides the scenario seed when set.
  std::optional<std::uint64_t> seed;
};

/// Standard form, rank, feasibility and recommended direction per site.
RunOutput run_analyze(const Scenario& s, const RunOptions& opts);
/// Trotter convergence of the scheduled evolution: m, error, fitted_order.
RunOutput run_evolve(const Scenario& s, const RunOptions& opts);
/// Optimal-time QFI rates against the parallel-noise bound.
RunOutput run_qfi(const Scenario& s, const RunOptions& opts);
/// The qfi table over the full N x sigma grid plus log-log scaling fits.
RunOutput run_sweep(const Scenario& s, const RunOptions& opts);

/// Hamiltonian after the scenario's decoupling strategy.
SEHamiltonian apply_strategy(const Scenario& s);

/// Distribution of (1/N) sum_a lambda_a for N independent copies of p.
NoiseDistribution site_average(const NoiseDistribution& p, std::size_t n);

}  // namespace ddm
