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

// Dense complex operator algebra over composite finite-dimensional spaces.
//
// Factor ordering convention: system qubits come first, environment factors
// after. Factor 0 is the most significant index of the dense matrix, so
// embed(op, 0, qubit (x) qubit) is op (x) I.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ddm/error.hpp"

namespace ddm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kUnitNormTol = 1e-12;
inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 12;

/// Largest total Hilbert-space dimension any operator may have. Initialized
/// from DDM_DIM_CAP when set, otherwise 4096.
std::size_t dimension_cap();
void set_dimension_cap(std::size_t cap);

enum class FactorKind { system, environment };

struct Factor {
  FactorKind kind;
  std::size_t dim;

  bool operator==(const Factor&) const = default;
};

class HilbertSpace {
 public:
  /// The trivial one-dimensional space (no factors).
  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<Factor> factors);

  static HilbertSpace qubits(std::size_t n);
  static HilbertSpace environment(std::vector<std::size_t> dims);
  /// n system qubits followed by environment factors.
  static HilbertSpace composite(std::size_t n_qubits,
                                const std::vector<std::size_t>& env_dims);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t num_factors() const noexcept { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::vector<std::size_t> dims() const;

  std::size_t num_system() const noexcept;
  std::size_t system_dim() const noexcept;
  std::size_t environment_dim() const noexcept;
  HilbertSpace system_part() const;
  HilbertSpace environment_part() const;
  HilbertSpace subspace(const std::set<std::size_t>& keep) const;
  /// Concatenation, this space's factors first.
  HilbertSpace tensor(const HilbertSpace& other) const;

  bool operator==(const HilbertSpace& other) const { return factors_ == other.factors_; }

 private:
  std::vector<Factor> factors_;
  std::size_t dim_ = 1;
};

class DenseOperator {
 public:
  /// The 1x1 zero operator on the trivial space.
  DenseOperator() : m_(Matrix::Zero(1, 1)) {}
  DenseOperator(HilbertSpace space, Matrix entries);

  static DenseOperator identity(const HilbertSpace& space);
  static DenseOperator zero(const HilbertSpace& space);

  const HilbertSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return space_.dim(); }

  DenseOperator adjoint() const { return {space_, m_.adjoint()}; }
  Complex trace() const { return m_.trace(); }
  /// max |M_ij|
  double max_abs() const;
  bool is_hermitian(double tol = kHermitianTol) const;
  bool is_unitary(double tol = kUnitaryTol) const;

  DenseOperator& operator+=(const DenseOperator& rhs);
  DenseOperator& operator-=(const DenseOperator& rhs);
  DenseOperator& operator*=(Complex s);

  friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
  friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
  friend DenseOperator operator*(DenseOperator a, Complex s) { return a *= s; }
  friend DenseOperator operator*(Complex s, DenseOperator a) { return a *= s; }
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);

 private:
  HilbertSpace space_;
  Matrix m_;
};

/// max |A - B| over entries; spaces must agree.
double max_distance(const DenseOperator& a, const DenseOperator& b);
/// Largest singular value.
double operator_norm(const Matrix& m);
/// sqrt(tr A^dagger A)
double hs_norm(const DenseOperator& a);
/// tr(A^dagger B)
Complex hs_inner(const DenseOperator& a, const DenseOperator& b);

class UnitVector3 {
 public:
  /// Throws invalid_argument unless |v| = 1 within 1e-12.
  explicit UnitVector3(const Eigen::Vector3d& v);
  UnitVector3(double x, double y, double z) : UnitVector3(Eigen::Vector3d(x, y, z)) {}
  /// Normalizes v; throws for a (near) zero vector.
  static UnitVector3 normalized(const Eigen::Vector3d& v);

  static UnitVector3 x_axis() { return {1.0, 0.0, 0.0}; }
  static UnitVector3 y_axis() { return {0.0, 1.0, 0.0}; }
  static UnitVector3 z_axis() { return {0.0, 0.0, 1.0}; }

  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }
  double operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }
  const Eigen::Vector3d& vector() const noexcept { return v_; }
  double dot(const UnitVector3& o) const { return v_.dot(o.v_); }
  UnitVector3 operator-() const { return UnitVector3(Eigen::Vector3d(-v_)); }

 private:
  Eigen::Vector3d v_;
};

/// I, sigma_1, sigma_2, sigma_3 for j = 0..3, on a single system qubit.
DenseOperator pauli(int j);
/// n . sigma
DenseOperator sigma_n(const UnitVector3& n);

/// Tensor product; the result space is a.space() followed by b.space().
DenseOperator kron(const DenseOperator& a, const DenseOperator& b);
/// op on factor `site`, identity on every other factor of `space`.
DenseOperator embed(const DenseOperator& op, std::size_t site, const HilbertSpace& space);

/// exp(-i H t) through the eigendecomposition of a Hermitian H.
DenseOperator evolve(const DenseOperator& hamiltonian, double t);
/// exp(M) by scaling and squaring, for arbitrary (non-normal) M.
Matrix expm_general(const Matrix& m);

DenseOperator partial_trace(const DenseOperator& rho, const std::set<std::size_t>& keep);

/// Checks positivity (eigenvalues >= -tol) and unit trace.
bool is_density_matrix(const DenseOperator& rho, double tol = 1e-10);
/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues below `floor` (relative to the largest) are set to zero.
Matrix psd_sqrt(const Matrix& m, double floor = 1e-14);

/// tr sqrt(tau^1/2 rho tau^1/2), evaluated as the trace norm of
/// sqrt(rho) sqrt(tau) so that rank-deficient states keep full precision.
double uhlmann_fidelity(const DenseOperator& rho, const DenseOperator& tau);

/// Pure state |psi><psi|; psi is normalized on entry.
DenseOperator projector(const HilbertSpace& space, const Vector& psi);

/// Pauli string over system sites, e.g. "IXZ". Site 0 is the leftmost label.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::string labels);
  static PauliString identity(std::size_t n) { return PauliString(std::string(n, 'I')); }
  /// Single non-identity Pauli j (1..3) at `site` of n.
  static PauliString single(std::size_t n, std::size_t site, int j);

  std::size_t size() const noexcept { return labels_.size(); }
  char operator[](std::size_t i) const { return labels_.at(i); }
  /// 0..3 index of the Pauli at site i.
  int index(std::size_t i) const;
  const std::string& str() const noexcept { return labels_; }
  std::size_t weight() const;
  std::vector<std::size_t> support() const;
  bool is_identity() const { return weight() == 0; }

  /// Dense 2^n x 2^n matrix.
  Matrix matrix() const;
  DenseOperator op() const;

  auto operator<=>(const PauliString&) const = default;

 private:
  std::string labels_;
};

/// Real coefficients a_P of a Hermitian system operator M = sum_P a_P P.
/// Terms with |a_P| <= cutoff are dropped; output is sorted by string.
std::vector<std::pair<PauliString, double>> pauli_decompose(const Matrix& m,
                                                           std::size_t n_qubits,
                                                           double cutoff = 1e-14);

/// {dims, re, im} row-major dump.
nlohmann::json to_json(const DenseOperator& op);
DenseOperator operator_from_json(const nlohmann::json& j, FactorKind kind);

}  // namespace ddm
