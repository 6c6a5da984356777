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

// Quantum and classical Fisher information, rate bounds under parallel noise
// and precision scaling with the number of probes.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ddm/dynamics.hpp"

namespace ddm {

inline constexpr const char* kQfiConvention = "generator S3/2; noiseless GHZ QFI = N^2 t^2";

struct QFIResult {
  double qfi = 0.0;
  double qfi_per_time = 0.0;
  double time = 0.0;
  std::size_t n = 1;
  std::string convention = kQfiConvention;
};

using StateFamily = std::function<DenseOperator(double)>;

/// 8 (1 - F(rho(theta - h/2), rho(theta + h/2))) / h^2.
double qfi_from_fidelity(const StateFamily& family, double theta, double dtheta = 1e-4);

struct CheckedQFI {
  double qfi;
  double qfi_half_step;
  double relative_change;  // |qfi - qfi_half_step| / max(qfi, tiny)
};

/// qfi_from_fidelity at h and h/2.
CheckedQFI qfi_from_fidelity_checked(const StateFamily& family, double theta, double dtheta = 1e-4);

/// 4 Var(G) for the pure family exp(-i theta G)|psi>.
double qfi_pure(const Vector& psi, const Matrix& generator);

/// N^2 t^2 |E[exp(-i N lambda t)]|^2 for a GHZ probe.
QFIResult qfi_ghz(std::size_t n, const NoiseDistribution& p, double t);
QFIResult qfi_ghz_gaussian(std::size_t n, double sigma, double t);

MaybeUnbounded classical_fisher(const NoiseDistribution& p);
/// N sqrt(F_cl); unbounded propagates.
MaybeUnbounded parallel_bound(std::size_t n, const NoiseDistribution& p);

struct OptimalTime {
  double t_opt = 0.0;
  double rate = 0.0;
  bool unbounded = false;  // sigma = 0: the rate grows without limit in t
};

/// Golden-section maximization of rate(t) on (0, t_max], tolerance 1e-10 in t.
OptimalTime maximize_rate(const std::function<double(double)>& rate, double t_max);
/// Maximizes qfi_ghz_gaussian(N, sigma, t) / t over t in (0, 10 / (N sigma)].
OptimalTime optimal_time(std::size_t n, double sigma);

/// Symmetrized independent fluctuations: sigma_bar = sigma / sqrt N, rate at the optimal time.
QFIResult local_fluctuation_rate(std::size_t n, double sigma);

struct VarianceCheck {
  std::size_t draws = 0;
  double empirical_std = 0.0;
  double expected_std = 0.0;
  double standard_error = 0.0;  // of the empirical std
  bool within_three_se = false;
};

/// Samples c_bar = (1/N) sum_a c^(a) with c^(a) ~ gaussian(0, sigma), one
/// generator stream per draw.
VarianceCheck sample_mean_coupling(std::size_t n, double sigma, std::size_t draws, std::uint64_t seed,
                                   std::size_t threads = 1);

struct ScalingFit {
  std::vector<double> n;
  std::vector<double> rate;
  double beta = 0.0;
  double residual = 0.0;

  nlohmann::json to_json() const;
};

/// Log-log least squares of rate against N; needs at least four points.
ScalingFit fit_scaling(const std::vector<double>& n, const std::vector<double>& rate);

enum class ScalingModel { noiseless, collective, local };

/// noiseless: F at the fixed time t. collective / local: F / t_opt at the
/// optimal time for gaussian(sigma), with sigma / sqrt N for local noise.
ScalingFit scaling_sweep(const std::vector<std::size_t>& n_values, ScalingModel model, double sigma, double t = 1.0,
                         std::size_t threads = 1);

struct PrecisionEstimate {
  double delta_omega;
  double repetitions;
  double total_time;  // repetitions * t, 0 when no time was given
};

/// delta omega = (nu F)^-1/2
PrecisionEstimate cramer_rao(double qfi, double repetitions);
/// nu = T / t_opt
PrecisionEstimate cramer_rao_total_time(double qfi, double total_time, double t_opt);

struct SystematicFloor {
  double floor;
  bool trivial;  // environment in the zero eigenstate: the offset never enters
};

/// An unknown but fixed coupling offset of width w shifts the signal phase by
/// w * ell, indistinguishable from a shift of omega.
SystematicFloor systematic_error_floor(double prior_width, double ell = 1.0);

}  // namespace ddm
