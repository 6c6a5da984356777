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

// Pulse schedules, the unital maps they induce in the fast-pulse limit, and
// the decoupling strategies built from them.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ddm/hamiltonian.hpp"

namespace ddm {

/// Gates u_0..u_{n-1} on the system qubits; u_{i} is applied at times[i] and
/// the interval (times[i], times[i+1]] follows it. times[0] = 0.
class PulseSchedule {
 public:
  PulseSchedule(std::vector<DenseOperator> gates, std::vector<double> times);

  /// Schedule whose toggling frame during interval i is frames[i]
  /// (frame_i = u_{i-1} ... u_0).
  static PulseSchedule from_frames(const std::vector<DenseOperator>& frames, std::vector<double> times);

  const std::vector<DenseOperator>& gates() const noexcept { return gates_; }
  const std::vector<double>& times() const noexcept { return times_; }
  std::size_t intervals() const noexcept { return gates_.size(); }
  double duration() const noexcept { return times_.back(); }
  std::size_t num_qubits() const noexcept { return gates_.front().space().num_factors(); }

  /// Product of all gates of one cycle, u_{n-1} ... u_0.
  DenseOperator residual() const;
  /// Same gates, interval boundaries scaled to the given total duration.
  PulseSchedule rescaled(double duration) const;

 private:
  std::vector<DenseOperator> gates_;
  std::vector<double> times_;
};

struct Branch {
  double probability;
  DenseOperator unitary;
};

/// E(X) = sum_i p_i U_i X U_i^dagger on the system qubits.
class UnitalMap {
 public:
  explicit UnitalMap(std::vector<Branch> branches);

  static UnitalMap identity(std::size_t n_qubits);

  const std::vector<Branch>& branches() const noexcept { return branches_; }
  std::size_t num_qubits() const noexcept { return qubits_; }

  /// Acts on system operators (dim 2^n) or on system (x) environment
  /// operators whose leading n factors are the system qubits.
  DenseOperator apply(const DenseOperator& op) const;

  /// The map acting on qubit `site` of `n` (identity elsewhere).
  UnitalMap on_site(std::size_t site, std::size_t n) const;

 private:
  std::vector<Branch> branches_;
  std::size_t qubits_;
};

/// second o first: branches (p_i q_j, V_j U_i).
UnitalMap compose(const UnitalMap& second, const UnitalMap& first);
/// Convex mixture lambda * a + (1 - lambda) * b.
UnitalMap mix(double lambda, const UnitalMap& a, const UnitalMap& b);

UnitalMap schedule_to_map(const PulseSchedule& s);

/// H_eff = sum_i p_i (U_i (x) 1) H (U_i (x) 1)^dagger, re-expanded in Pauli strings.
SEHamiltonian apply_map(const UnitalMap& m, const SEHamiltonian& h);

/// {(1/2, I), (1/2, sigma_r)}: pi_r(sigma_n) = (r.n) sigma_r.
UnitalMap projection_map(const UnitVector3& r);

struct DecouplingDirection {
  bool feasible;
  std::optional<UnitVector3> r;
  double r3;  // z . r, > 0 when feasible
};

/// Direction r orthogonal to the noise plane. Throws rank_too_high when
/// b3 > tol. For rank <= 1 the free direction is chosen to maximize r3.
DecouplingDirection decoupling_direction(const StandardForm& sf, double tol = 1e-9);

struct FeasibilityReport {
  bool feasible;
  std::optional<std::array<double, 2>> alphas;
  double slowdown;  // r3 = (1 + a1^2 + a2^2)^-1/2 when feasible, else 0
  double residual;  // || c3 A3 - a1 c1 A1 - a2 c2 A2 ||_HS
};

/// Least-squares solve of c3 A3 = a1 c1 A1 + a2 c2 A2 on `site`.
FeasibilityReport feasibility(const SEHamiltonian& h, std::size_t site = 0);

struct SymmetrizeResult {
  SEHamiltonian hamiltonian;
  double c_bar;
  /// A_bar with H_SE = c_bar S3 (x) A_bar; zero operator when c_bar = 0.
  DenseOperator a_bar;
  /// (1/N) sum_a c~^(a) A~^(a), the surviving noise operator.
  DenseOperator symmetric_noise;
  /// Swap gates per random permutation (metadata only).
  std::size_t swaps_per_permutation;
};

/// Average over all site permutations in closed form. Noise must already be
/// parallel along z: single-site sigma_3 terms only.
SymmetrizeResult symmetrize(const SEHamiltonian& h);

/// Local rotation taking sigma_r to sigma_3 on every site.
UnitalMap alignment_map(const UnitVector3& r, std::size_t n_qubits);

struct DirectionOptimum {
  UnitVector3 r;
  double merit;      // r3^2 / sum_j (n_j.r)^2 b_j^2 var_j, +inf when unbounded
  bool unbounded;    // exact decoupling possible
  double gradient;   // tangential gradient norm at r
};

/// Multi-start ascent (Fibonacci-lattice starts) of the signal-to-noise
/// merit over the unit sphere.
DirectionOptimum optimize_direction(const StandardForm& sf, const std::array<double, 3>& variances,
                                    std::size_t starts = 32, std::size_t threads = 1);
double direction_merit(const StandardForm& sf, const std::array<double, 3>& variances,
                       const Eigen::Vector3d& r);

struct SchemeLayer {
  char gate;  // 'Z' or 'X'
  std::vector<std::size_t> sites;
  double period;
};

/// Two-layer local decoupling of a 1-D chain against diagonal noise of
/// range <= k: sigma_3 on every site, then sigma_1 on every site whose
/// index is not a multiple of k + 1.
struct CorrelatedScheme {
  std::size_t chain_length;
  std::size_t range;
  std::vector<SchemeLayer> layers;
  double alpha;  // fraction of sites whose signal survives

  /// Sites whose signal term survives.
  std::vector<std::size_t> survivors() const;
  /// Per-site projection maps in application order.
  std::vector<UnitalMap> local_maps() const;
  /// Full composed map (2^(#pulsed sites) branches).
  UnitalMap to_map() const;
  SEHamiltonian apply(const SEHamiltonian& h) const;
  nlohmann::json to_json() const;
};

CorrelatedScheme correlated_scheme(std::size_t chain_length, std::size_t range);

}  // namespace ddm
