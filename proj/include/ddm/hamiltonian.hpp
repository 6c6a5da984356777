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

// System-environment Hamiltonians
//
//   H = omega * sum_k w_k P_k (x) 1  +  sum_terms c P (x) A  +  1 (x) c0 A0
//
// The signal part starts out as omega * S3 (w = 1 on every sigma_3^(a)) and is
// rewritten by decoupling maps. Environment operators always act on the full
// environment space; the independent-environment constructors embed each
// site's operators into that site's own factor.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ddm/operators.hpp"

namespace ddm {

enum class EnvModel { independent, common };

const char* to_string(EnvModel model) noexcept;

struct SignalTerm {
  double weight;
  PauliString paulis;
};

struct CouplingTerm {
  double coupling;
  PauliString paulis;
  DenseOperator env_op;
};

/// 1 (x) c0 A0. No control on the system can change it.
struct TrivialTerm {
  double coupling;
  DenseOperator env_op;
};

class SEHamiltonian {
 public:
  /// Noise-free omega * S3 on `sites` qubits. For the independent model
  /// env_dims holds one dimension per site; for the common model it holds the
  /// single shared dimension.
  SEHamiltonian(double omega, std::size_t sites, EnvModel model, std::vector<std::size_t> env_dims);

  double omega() const noexcept { return omega_; }
  std::size_t sites() const noexcept { return sites_; }
  EnvModel env_model() const noexcept { return model_; }
  const std::vector<std::size_t>& env_dims() const noexcept { return env_dims_; }
  const HilbertSpace& space() const noexcept { return space_; }
  const HilbertSpace& system_space() const noexcept { return system_space_; }
  const HilbertSpace& environment_space() const noexcept { return env_space_; }

  const std::vector<SignalTerm>& signal() const noexcept { return signal_; }
  const std::vector<CouplingTerm>& terms() const noexcept { return terms_; }
  const std::optional<TrivialTerm>& trivial() const noexcept { return trivial_; }

  void set_signal(std::vector<SignalTerm> signal);
  /// env_op must be Hermitian on environment_space().
  void add_term(double coupling, PauliString paulis, DenseOperator env_op);
  void clear_terms() { terms_.clear(); }
  void set_trivial(double coupling, DenseOperator env_op);

  /// Lift an operator on environment factor `factor` to the full environment.
  DenseOperator env_factor_op(const DenseOperator& op, std::size_t factor) const;

  /// Full dense matrix on space().
  DenseOperator matrix() const;
  /// omega * sum_k w_k P_k (x) 1
  DenseOperator signal_matrix() const;
  /// System part only: omega * sum_k w_k P_k on system_space().
  DenseOperator signal_system_matrix() const;
  /// sum_terms c P (x) A, trivial term excluded.
  DenseOperator noise_matrix() const;
  /// Noise terms whose Pauli string acts on `site` alone.
  DenseOperator site_noise_matrix(std::size_t site) const;

  /// C~_j = sum c A over terms that are sigma_j on `site` and identity elsewhere.
  std::array<DenseOperator, 3> site_couplings(std::size_t site) const;

 private:
  double omega_;
  std::size_t sites_;
  EnvModel model_;
  std::vector<std::size_t> env_dims_;
  HilbertSpace space_;
  HilbertSpace system_space_;
  HilbertSpace env_space_;
  std::vector<SignalTerm> signal_;
  std::vector<CouplingTerm> terms_;
  std::optional<TrivialTerm> trivial_;
};

/// Per-site couplings c_0..c_3 and environment operators A_0..A_3. All A_j
/// share one dimension: the site's own factor (independent model) or the
/// shared environment (common model).
struct SiteCoupling {
  std::array<double, 4> c;
  std::array<DenseOperator, 4> A;
};

SEHamiltonian single_qubit(double omega, const std::array<double, 4>& c, const std::array<DenseOperator, 4>& A);
SEHamiltonian n_qubit_independent(double omega, const std::vector<SiteCoupling>& per_site);
SEHamiltonian n_qubit_common(double omega, const std::vector<SiteCoupling>& per_site);

/// Relabels system sites: site a of `h` becomes site perm[a] of the result.
SEHamiltonian permute_sites(const SEHamiltonian& h, const std::vector<std::size_t>& perm);

struct StandardForm {
  std::array<double, 3> b{};              // b1 >= b2 >= b3 >= 0
  std::array<double, 3> lambda{};         // eigenvalues of the overlap matrix, same order
  std::array<UnitVector3, 3> frame{UnitVector3::x_axis(), UnitVector3::y_axis(), UnitVector3::z_axis()};
  std::array<DenseOperator, 3> B;         // zero operator where b_j = 0
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // columns are the frame vectors
  Eigen::Matrix3d overlap = Eigen::Matrix3d::Zero();       // O~_ik = tr C~_i C~_k
  bool degenerate = false;                // all-zero noise: frame is arbitrary

  /// sum_j b_j sigma_{n_j}^(site) (x) B_j on the space of `like`.
  DenseOperator reconstruct(const SEHamiltonian& like, std::size_t site) const;
};

/// Schmidt-type decomposition of the single-site noise on `site`.
StandardForm standard_form(const SEHamiltonian& h, std::size_t site = 0);

struct NoiseRank {
  int rank;
  double tolerance;
};

NoiseRank noise_rank(const StandardForm& sf, double tol = 1e-9);

}  // namespace ddm
