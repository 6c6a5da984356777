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

#include <doctest.h>

#include "ddm/hamiltonian.hpp"
#include "oracle.hpp"

using namespace ddm;

namespace {

DenseOperator env(const Matrix& m) { return {HilbertSpace::environment({static_cast<std::size_t>(m.rows())}), m}; }

DenseOperator env_zero(std::size_t d) { return DenseOperator::zero(HilbertSpace::environment({d})); }

DenseOperator env_id(std::size_t d) { return DenseOperator::identity(HilbertSpace::environment({d})); }

struct RandomSingle {
  SEHamiltonian h;
  std::array<double, 4> c;
  std::array<Matrix, 4> a;
  double omega;
};

RandomSingle random_single(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> nd;
  RandomSingle r{SEHamiltonian(1.0, 1, EnvModel::common, {d}), {}, {}, 0.5 + std::abs(nd(rng))};
  std::array<DenseOperator, 4> ops;
  for (std::size_t j = 0; j < 4; ++j) {
    r.c[j] = nd(rng);
    r.a[j] = oracle::random_hermitian(rng, static_cast<Eigen::Index>(d));
    ops[j] = env(r.a[j]);
  }
  r.h = single_qubit(r.omega, r.c, ops);
  return r;
}

// Hamiltonian with couplings C~_i = sum_k R_ik C_k, i.e. the Pauli frame
// rotated by R.
SEHamiltonian rotate_frame(const RandomSingle& r, const Eigen::Matrix3d& rot, std::size_t d) {
  std::array<DenseOperator, 4> ops{env_id(d), env_zero(d), env_zero(d), env_zero(d)};
  for (std::size_t i = 0; i < 3; ++i) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < 3; ++k) m += rot(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * r.c[k + 1] * r.a[k + 1];
    ops[i + 1] = env(m);
  }
  return single_qubit(r.omega, {0.0, 1.0, 1.0, 1.0}, ops);
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::Quaterniond q(nd(rng), nd(rng), nd(rng), nd(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace

TEST_CASE("single-qubit hamiltonians") {
  SUBCASE("noiseless") {
    const SEHamiltonian h = single_qubit(0.7, {0, 0, 0, 0}, {env_id(2), env_zero(2), env_zero(2), env_zero(2)});
    CHECK(oracle::max_abs(h.matrix().matrix() - 0.7 * oracle::kron(oracle::pauli(3), Matrix::Identity(2, 2))) < 1e-15);
    CHECK(h.terms().empty());
  }
  SUBCASE("pure transverse noise") {
    const SEHamiltonian h =
        single_qubit(0.0, {0, 1, 0, 0}, {env_id(2), env(oracle::pauli(3)), env_zero(2), env_zero(2)});
    CHECK(oracle::max_abs(h.matrix().matrix() - oracle::kron(oracle::pauli(1), oracle::pauli(3))) < 1e-15);
  }
  SUBCASE("random couplings assemble term by term") {
    std::mt19937_64 rng(11);
    const RandomSingle r = random_single(rng, 3);
    Matrix expected = r.omega * oracle::kron(oracle::pauli(3), Matrix::Identity(3, 3));
    for (int j = 0; j < 4; ++j) expected += r.c[static_cast<std::size_t>(j)] * oracle::kron(oracle::pauli(j), r.a[static_cast<std::size_t>(j)]);
    CHECK(r.h.matrix().is_hermitian());
    CHECK(oracle::max_abs(r.h.matrix().matrix() - expected) < 1e-13);
  }
  SUBCASE("non-Hermitian environment operators are rejected") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(single_qubit(1.0, {0, 1, 0, 0}, {env_id(2), env(bad), env_zero(2), env_zero(2)}), Error);
  }
}

TEST_CASE("n-qubit hamiltonians") {
  SUBCASE("independent, no noise") {
    const SEHamiltonian h(0.5, 2, EnvModel::independent, {1, 1});
    const Matrix expected = 0.5 * (oracle::pauli_string("ZI") + oracle::pauli_string("IZ"));
    CHECK(oracle::max_abs(h.matrix().matrix() - expected) < 1e-15);
  }
  SUBCASE("independent per-site transverse noise matches explicit assembly") {
    std::mt19937_64 rng(12);
    const Matrix a0 = oracle::random_hermitian(rng, 2), a1 = oracle::random_hermitian(rng, 2);
    std::vector<SiteCoupling> sites{{{0, 0.3, 0, 0}, {env_id(2), env(a0), env_zero(2), env_zero(2)}},
                                    {{0, 0.7, 0, 0}, {env_id(2), env(a1), env_zero(2), env_zero(2)}}};
    const SEHamiltonian h = n_qubit_independent(1.2, sites);
    CHECK(h.space().dim() == 16);
    const Matrix i2 = Matrix::Identity(2, 2);
    Matrix expected = 1.2 * oracle::kron(oracle::pauli_string("ZI") + oracle::pauli_string("IZ"), Matrix::Identity(4, 4));
    // Ordering: qubit 0, qubit 1, environment of site 0, environment of site 1.
    expected += 0.3 * oracle::kron(oracle::kron(oracle::pauli_string("XI"), a0), i2);
    expected += 0.7 * oracle::kron(oracle::kron(oracle::pauli_string("IX"), i2), a1);
    CHECK(oracle::max_abs(h.matrix().matrix() - expected) < 1e-14);
  }
  SUBCASE("common identity operator is a fluctuation-free collective term") {
    std::vector<SiteCoupling> sites(2, SiteCoupling{{0, 0, 0, 0.4}, {env_id(2), env_zero(2), env_zero(2), env_id(2)}});
    const SEHamiltonian h = n_qubit_common(1.0, sites);
    const Matrix sz = oracle::pauli_string("ZI") + oracle::pauli_string("IZ");
    CHECK(oracle::max_abs(h.matrix().matrix() - oracle::kron(1.4 * sz, Matrix::Identity(2, 2))) < 1e-14);
  }
  SUBCASE("common sigma_3 on both z couplings is collective dephasing") {
    std::vector<SiteCoupling> sites(2, SiteCoupling{{0, 0, 0, 1.0}, {env_id(2), env_zero(2), env_zero(2), env(oracle::pauli(3))}});
    const SEHamiltonian h = n_qubit_common(0.0, sites);
    const Matrix sz = oracle::pauli_string("ZI") + oracle::pauli_string("IZ");
    CHECK(oracle::max_abs(h.noise_matrix().matrix() - oracle::kron(sz, oracle::pauli(3))) < 1e-14);
  }
  SUBCASE("environment dimension mismatches are reported") {
    std::vector<SiteCoupling> sites{{{0, 0, 0, 1.0}, {env_id(2), env_zero(2), env_zero(2), env_id(2)}},
                                    {{0, 0, 0, 1.0}, {env_id(3), env_zero(3), env_zero(3), env_id(3)}}};
    CHECK_THROWS_AS(n_qubit_common(1.0, sites), Error);
  }
}

TEST_CASE("site permutation relabels qubits") {
  std::mt19937_64 rng(13);
  SEHamiltonian h(1.0, 3, EnvModel::common, {2});
  h.add_term(0.8, PauliString("XZI"), env(oracle::random_hermitian(rng, 2)));
  h.add_term(-0.3, PauliString("IIY"), env(oracle::random_hermitian(rng, 2)));
  const std::vector<std::size_t> perm{2, 0, 1};
  const Matrix p = oracle::qubit_permutation(perm, 2);
  CHECK(oracle::max_abs(permute_sites(h, perm).matrix().matrix() - p * h.matrix().matrix() * p.adjoint()) < 1e-14);
}

TEST_CASE("standard form examples") {
  SUBCASE("already standard") {
    const Matrix b = oracle::pauli(1) / std::sqrt(2.0);
    const SEHamiltonian h = single_qubit(1.0, {0, 1, 0, 0}, {env_id(2), env(b), env_zero(2), env_zero(2)});
    const StandardForm sf = standard_form(h);
    CHECK(sf.b[0] == doctest::Approx(1.0));
    CHECK(sf.b[1] == doctest::Approx(0.0));
    CHECK(sf.b[2] == doctest::Approx(0.0));
    CHECK(sf.frame[0].x() == doctest::Approx(1.0));
    CHECK(noise_rank(sf).rank == 1);
  }
  SUBCASE("two orthonormal environment operators") {
    const Matrix b = oracle::pauli(1) / std::sqrt(2.0), bp = oracle::pauli(3) / std::sqrt(2.0);
    const SEHamiltonian h = single_qubit(1.0, {0, 2, 1, 0}, {env_id(2), env(b), env(bp), env_zero(2)});
    const StandardForm sf = standard_form(h);
    CHECK(sf.b[0] == doctest::Approx(2.0));
    CHECK(sf.b[1] == doctest::Approx(1.0));
    CHECK(sf.b[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sf.overlap(0, 0) == doctest::Approx(4.0));
    CHECK(sf.overlap(1, 1) == doctest::Approx(1.0));
    CHECK(noise_rank(sf).rank == 2);
  }
  SUBCASE("rotated input recovers the rotated frame") {
    std::mt19937_64 rng(14);
    // Distinct b_j so that the frame is unique up to sign.
    const Matrix b1 = oracle::pauli(1) / std::sqrt(2.0), b2 = oracle::pauli(2) / std::sqrt(2.0),
                 b3 = oracle::pauli(3) / std::sqrt(2.0);
    const Eigen::Matrix3d rot = random_rotation(rng);
    const std::array<double, 3> bs{3.0, 2.0, 1.0};
    const std::array<Matrix, 3> bops{b1, b2, b3};
    std::array<DenseOperator, 4> ops{env_id(2), env_zero(2), env_zero(2), env_zero(2)};
    for (Eigen::Index i = 0; i < 3; ++i) {
      Matrix m = Matrix::Zero(2, 2);
      for (Eigen::Index j = 0; j < 3; ++j) m += rot(i, j) * bs[static_cast<std::size_t>(j)] * bops[static_cast<std::size_t>(j)];
      ops[static_cast<std::size_t>(i) + 1] = env(m);
    }
    const StandardForm sf = standard_form(single_qubit(1.0, {0, 1, 1, 1}, ops));
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(sf.b[j] == doctest::Approx(bs[j]));
      const Eigen::Vector3d expected = rot.col(static_cast<Eigen::Index>(j));
      CHECK(std::abs(sf.frame[j].vector().dot(expected)) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("standard form properties on random hamiltonians") {
  std::mt19937_64 rng(15);
  double recon = 0.0, overlap = 0.0, lambda_min = 0.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 3);
    const RandomSingle r = random_single(rng, d);
    const StandardForm sf = standard_form(r.h);
    recon = std::max(recon, max_distance(sf.reconstruct(r.h, 0), r.h.noise_matrix()));
    for (std::size_t j = 0; j < 3; ++j) {
      lambda_min = std::min(lambda_min, sf.lambda[j]);
      for (std::size_t k = 0; k < 3; ++k) {
        const DenseOperator bj = sf.B[j] * Complex(sf.b[j]), bk = sf.B[k] * Complex(sf.b[k]);
        const double target = j == k ? sf.b[j] * sf.b[j] : 0.0;
        overlap = std::max(overlap, std::abs((bj * bk).trace().real() - target));
      }
    }
    CHECK(sf.b[0] >= sf.b[1]);
    CHECK(sf.b[1] >= sf.b[2]);
    // The frame is a proper rotation.
    CHECK(sf.rotation.determinant() == doctest::Approx(1.0));
    CHECK((sf.rotation.transpose() * sf.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK((sf.rotation.col(j) - sf.frame[static_cast<std::size_t>(j)].vector()).norm() < 1e-15);
    }
  }
  CHECK(recon <= 1e-8);
  CHECK(overlap <= 1e-8);
  CHECK(lambda_min >= -1e-12);
}

TEST_CASE("noise rank") {
  StandardForm sf;
  sf.b = {1, 0, 0};
  CHECK(noise_rank(sf).rank == 1);
  sf.b = {2, 1, 0};
  CHECK(noise_rank(sf).rank == 2);
  sf.b = {1, 1, 1e-12};
  CHECK(noise_rank(sf, 1e-9).rank == 2);

  SUBCASE("invariant under rotations of the Pauli frame") {
    std::mt19937_64 rng(16);
    for (int i = 0; i < 50; ++i) {
      const RandomSingle r = random_single(rng, 2 + static_cast<std::size_t>(i % 2));
      const int base = noise_rank(standard_form(r.h)).rank;
      CHECK(noise_rank(standard_form(rotate_frame(r, random_rotation(rng), r.a[0].rows()))).rank == base);
    }
    // A rank-deficient case: all couplings share one operator.
    std::array<DenseOperator, 4> ops{env_id(2), env(oracle::pauli(1)), env(oracle::pauli(1)), env_zero(2)};
    const SEHamiltonian h = single_qubit(1.0, {0, 0.5, 0.2, 0}, ops);
    CHECK(noise_rank(standard_form(h)).rank == 1);
  }
}
