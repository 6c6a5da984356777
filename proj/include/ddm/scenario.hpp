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

// Declarative scenario files (JSON).
//
//   {
//     "name": "...",
//     "omega": 1.0, "sites": 1,
//     "env": {"model": "independent" | "common", "dims": [2]},
//     "terms": [{"c": 0.5, "paulis": "X", "env_op": "pauli_z", "env_factor": 0}],
//     "trivial": {"c": 0.1, "env_op": "identity"},
//     "strategy": {"type": "none" | "projection" | "schedule" | "symmetrize" | "correlated", ...},
//     "noise": {"kind": "gaussian" | "discrete" | "equally_gapped" | "tabulated", ...,
//               "correlation": "collective" | "local"},
//     "sweep": {"N": [...], "sigma": [...], "t": [...], "m": [...], "time": 1.0},
//     "noise_variances": [1, 1, 1],
//     "seed": 42,
//     "outputs": ["monte_carlo", ...]
//   }
//
// env_op is a preset name (pauli_x, pauli_y, pauli_z, identity, number_op,
// random_hermitian:<seed>) or an inline {"re": [[...]], "im": [[...]]}.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddm/metrology.hpp"

namespace ddm {

enum class StrategyType { none, projection, schedule, symmetrize, correlated };

const char* to_string(StrategyType type) noexcept;

struct StrategySpec {
  StrategyType type = StrategyType::none;
  std::optional<UnitVector3> r;
  std::optional<PulseSchedule> schedule;
  std::size_t k = 0;
};

enum class NoiseCorrelation { collective, local };

struct NoiseSpec {
  NoiseDistribution distribution = NoiseDistribution::gaussian(0.0, 1.0);
  NoiseCorrelation correlation = NoiseCorrelation::collective;
  /// Coupling multiplying the spectrum: lambda = c_bar * ell.
  double c_bar = 1.0;
  /// Spectral gap of an equally spaced discrete spectrum.
  std::optional<double> gap;
  /// Distribution of ell before scaling by c_bar.
  NoiseDistribution spectrum = NoiseDistribution::gaussian(0.0, 1.0);
};

struct SweepSpec {
  std::vector<std::size_t> n{1};
  std::vector<double> sigma;
  std::vector<double> t;
  std::vector<std::size_t> m{16, 32, 64, 128, 256, 512, 1024};
  double time = 1.0;
};

struct Scenario {
  std::string name;
  std::optional<SEHamiltonian> hamiltonian;
  StrategySpec strategy;
  std::optional<NoiseSpec> noise;
  SweepSpec sweep;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;
  std::array<double, 3> noise_variances{1.0, 1.0, 1.0};
  /// Sorted-key dump of the parsed document, used for hashing.
  std::string canonical;

  bool wants(std::string_view output) const;
};

/// Throws Error(parse) with "line L, column C" for syntax errors and the JSON
/// path of the offending field for schema errors. Relative schedule files are
/// resolved against base_dir.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Preset or inline environment operator of dimension dim.
DenseOperator environment_operator(const nlohmann::json& spec, std::size_t dim);

}  // namespace ddm
