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

// Finite-rate pulsed evolution and the dephasing channel left by noise that
// runs parallel to the signal.
//
// Phase convention: the metrology generator is S3 / 2, so a GHZ state picks
// up the relative phase exp(-i N (omega + lambda) t) and its noiseless QFI is
// N^2 t^2. The Hamiltonian module keeps H_S = omega * S3 with sigma_3
// eigenvalues +-1; channel code scales S3 by kSignalGeneratorScale.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ddm/decoupling.hpp"

namespace ddm {

inline constexpr double kSignalGeneratorScale = 0.5;

/// Either a finite non-negative value or an explicit "unbounded" marker.
struct MaybeUnbounded {
  double value = 0.0;
  bool unbounded = false;

  static MaybeUnbounded finite(double v) { return {v, false}; }
  static MaybeUnbounded infinite() { return {0.0, true}; }
};

enum class NoiseKind { gaussian, discrete, mixture, tabulated };

const char* to_string(NoiseKind kind) noexcept;

/// Distribution of the fluctuating parallel coupling lambda.
///
/// Gaussian, discrete and mixture distributions are stored as weighted
/// components (mean, sigma) with sigma = 0 meaning a point mass, which keeps
/// their convolutions exact. Tabulated densities are piecewise linear.
class NoiseDistribution {
 public:
  struct Component {
    double weight;
    double mean;
    double sigma;
  };

  static NoiseDistribution gaussian(double mean, double sigma);
  /// Weights must sum to 1 within 1e-10; entries below 1e-14 are dropped.
  static NoiseDistribution discrete(std::vector<double> points, std::vector<double> weights);
  static NoiseDistribution mixture(std::vector<Component> components);
  /// Density samples on a strictly increasing grid; integral must be 1 within 1e-8.
  static NoiseDistribution tabulated(std::vector<double> grid, std::vector<double> density);
  /// Equally spaced spectrum l_k = offset + k * gap, k = 0..weights.size()-1.
  static NoiseDistribution equally_gapped(double offset, double gap, std::vector<double> weights);

  NoiseKind kind() const noexcept { return kind_; }
  const std::vector<Component>& components() const noexcept { return components_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double mean() const;
  double variance() const;
  /// Density at x; throws for distributions containing point masses.
  double density(double x) const;
  /// E[exp(-i lambda s)]
  Complex characteristic(double s) const;
  /// Distribution of factor * lambda.
  NoiseDistribution scaled(double factor) const;
  /// True when every component is a point mass.
  bool is_discrete() const noexcept;

 private:
  NoiseKind kind_ = NoiseKind::gaussian;
  std::vector<Component> components_;
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// Distribution of lambda_a + lambda_b for independent lambda_a, lambda_b.
/// Exact for component distributions; tabulated inputs are convolved
/// numerically onto a grid.
NoiseDistribution convolve(const NoiseDistribution& a, const NoiseDistribution& b);

struct PulsedEvolution {
  SEHamiltonian hamiltonian;
  PulseSchedule schedule;  // one cycle; rescaled to total_time / cycles
  std::size_t cycles;
  double total_time;
};

/// Product over cycles of e^{-iH dt_{n-1}} u_{n-1} ... e^{-iH dt_0} u_0.
DenseOperator exact_pulsed_unitary(const PulsedEvolution& pe);

/// min over a global phase (Frobenius-optimal) of
/// || U_exact - (V^m (x) 1) exp(-i H_eff t) ||_op.
double trotter_error(const PulsedEvolution& pe, const SEHamiltonian& h_eff);

struct ConvergencePoint {
  std::size_t cycles;
  double error;
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  /// Log-log slope over the points with error > 1e-13; 0 when fewer than two.
  double fitted_order = 0.0;
};

/// trotter_error at every cycle count of the grid, H_eff from the schedule's map.
ConvergenceReport trotter_convergence(const SEHamiltonian& h, const PulseSchedule& cycle, double total_time,
                                      const std::vector<std::size_t>& cycle_grid, std::size_t threads = 1);

struct ParallelNoiseChannel {
  std::size_t n;
  NoiseDistribution distribution;
  double time;
  double omega;
};

/// Factor multiplying the GHZ coherence besides the signal phase: E[exp(-i N lambda t)].
Complex ghz_coherence(const ParallelNoiseChannel& ch);

/// Full 2^N x 2^N dephasing on an N-qubit density matrix.
DenseOperator channel_output(const ParallelNoiseChannel& ch, const DenseOperator& rho);
/// Same channel on the two-level GHZ representation {|0..0>, |1..1>}.
Eigen::Matrix2cd ghz_channel_output(const ParallelNoiseChannel& ch, const Eigen::Matrix2cd& rho);

/// (|0..0> + |1..1>) / sqrt 2 on N qubits.
DenseOperator ghz_state(std::size_t n);
/// GHZ state in the two-level representation.
Eigen::Matrix2cd ghz_state_2d();

/// t = 2 pi / (gap * c_bar), where an equally gapped spectrum rephases.
double revival_time(double gap, double c_bar);

}  // namespace ddm
