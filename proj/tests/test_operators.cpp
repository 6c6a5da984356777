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

#include <numbers>

#include "ddm/operators.hpp"
#include "oracle.hpp"

using namespace ddm;

namespace {

DenseOperator qubit_op(const Matrix& m) { return {HilbertSpace::qubits(1), m}; }

}  // namespace

TEST_CASE("pauli matrices follow the standard convention") {
  CHECK(oracle::max_abs(pauli(0).matrix() - Matrix::Identity(2, 2)) == 0.0);
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  CHECK(oracle::max_abs(pauli(3).matrix() - z) == 0.0);
  const DenseOperator xy = pauli(1) * pauli(2);
  CHECK(max_distance(xy, pauli(3) * Complex(0, 1)) < 1e-15);
  CHECK_THROWS_AS(pauli(4), Error);
}

TEST_CASE("pauli products obey the su(2) multiplication table") {
  auto eps = [](int j, int k, int l) { return (j - k) * (k - l) * (l - j) / 2.0; };
  for (int j = 1; j <= 3; ++j) {
    for (int k = 1; k <= 3; ++k) {
      Matrix expected = (j == k ? 1.0 : 0.0) * Matrix::Identity(2, 2);
      for (int l = 1; l <= 3; ++l) expected += Complex(0, eps(j, k, l)) * oracle::pauli(l);
      CHECK(oracle::max_abs((pauli(j) * pauli(k)).matrix() - expected) < 1e-15);
    }
  }
}

TEST_CASE("sigma_n") {
  CHECK(max_distance(sigma_n(UnitVector3::z_axis()), pauli(3)) == 0.0);
  CHECK(max_distance(sigma_n(UnitVector3::x_axis()), pauli(1)) == 0.0);

  const double s = 1.0 / std::sqrt(3.0);
  const DenseOperator d = sigma_n(UnitVector3(s, s, s));
  CHECK(max_distance(d, (pauli(1) + pauli(2) + pauli(3)) * Complex(s)) < 1e-15);
  Eigen::SelfAdjointEigenSolver<Matrix> es(d.matrix());
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-14));

  SUBCASE("squares to the identity for random directions") {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const DenseOperator m = sigma_n(UnitVector3(oracle::random_unit(rng)));
      worst = std::max(worst, oracle::max_abs((m * m).matrix() - Matrix::Identity(2, 2)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("unit vectors are validated") {
  CHECK_THROWS_AS(UnitVector3(1.0, 1.0, 0.0), Error);
  CHECK_NOTHROW(UnitVector3::normalized(Eigen::Vector3d(1.0, 1.0, 0.0)));
  CHECK_THROWS_AS(UnitVector3::normalized(Eigen::Vector3d::Zero()), Error);
}

TEST_CASE("hilbert spaces") {
  const HilbertSpace s = HilbertSpace::composite(2, {3});
  CHECK(s.dim() == 12);
  CHECK(s.num_system() == 2);
  CHECK(s.system_dim() == 4);
  CHECK(s.environment_dim() == 3);
  CHECK(s.system_part() == HilbertSpace::qubits(2));
  CHECK(s.subspace({0, 2}).dims() == std::vector<std::size_t>{2, 3});
  CHECK(HilbertSpace().dim() == 1);
}

TEST_CASE("dense operators check their shape") {
  CHECK_THROWS_AS(DenseOperator(HilbertSpace::qubits(1), Matrix::Identity(3, 3)), Error);
  const DenseOperator a = pauli(1);
  const DenseOperator b(HilbertSpace::qubits(2), Matrix::Identity(4, 4));
  CHECK_THROWS_AS(a * b, Error);
  CHECK(a.is_hermitian());
  CHECK(a.is_unitary());
  CHECK_FALSE((a * Complex(0, 1) + pauli(0)).is_hermitian());
}

TEST_CASE("dimension cap") {
  const std::size_t old = dimension_cap();
  set_dimension_cap(8);
  CHECK_THROWS_AS(DenseOperator::identity(HilbertSpace::qubits(4)), Error);
  try {
    DenseOperator::identity(HilbertSpace::qubits(4));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dimension_cap);
  }
  set_dimension_cap(old);
  CHECK_NOTHROW(DenseOperator::identity(HilbertSpace::qubits(4)));
}

TEST_CASE("kron and embed agree with explicit tensor products") {
  std::mt19937_64 rng(1);
  const Matrix a = oracle::random_hermitian(rng, 2), b = oracle::random_hermitian(rng, 3);
  const DenseOperator k = kron(qubit_op(a), DenseOperator(HilbertSpace::environment({3}), b));
  CHECK(oracle::max_abs(k.matrix() - oracle::kron(a, b)) < 1e-14);

  const HilbertSpace two = HilbertSpace::qubits(2);
  CHECK(max_distance(embed(pauli(3), 0, two), DenseOperator(two, oracle::pauli_string("ZI"))) == 0.0);
  CHECK(max_distance(embed(pauli(0), 1, two), DenseOperator::identity(two)) == 0.0);

  const HilbertSpace mixed = HilbertSpace::composite(2, {3});
  const Matrix expected = oracle::kron(oracle::kron(Matrix::Identity(2, 2), oracle::pauli(2)), Matrix::Identity(3, 3));
  CHECK(oracle::max_abs(embed(pauli(2), 1, mixed).matrix() - expected) == 0.0);
  CHECK_THROWS_AS(embed(pauli(1), 2, mixed), Error);
}

TEST_CASE("evolve") {
  CHECK(max_distance(evolve(pauli(1), 0.0), pauli(0)) < 1e-15);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = std::exp(Complex(0, -std::numbers::pi / 2));
  expected(1, 1) = std::exp(Complex(0, std::numbers::pi / 2));
  CHECK(oracle::max_abs(evolve(pauli(3), std::numbers::pi / 2).matrix() - expected) < 1e-14);

  SUBCASE("matches a Taylor-series propagator and inverts under t -> -t") {
    std::mt19937_64 rng(2);
    for (Eigen::Index d : {2, 4, 6}) {
      const Matrix h = oracle::random_hermitian(rng, d);
      const DenseOperator op(HilbertSpace::environment({static_cast<std::size_t>(d)}), h);
      const DenseOperator u = evolve(op, 0.7);
      CHECK(oracle::max_abs(u.matrix() - oracle::propagator(h, 0.7)) < 1e-10);
      CHECK(max_distance(u.adjoint(), evolve(op, -0.7)) < 1e-10);
      CHECK(u.is_unitary());
    }
  }
  CHECK_THROWS_AS(evolve(pauli(1) * Complex(0, 1), 1.0), Error);
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(3);
  SUBCASE("product state") {
    const Matrix rs = oracle::random_density(rng, 2), re = oracle::random_density(rng, 3);
    const DenseOperator rho(HilbertSpace::composite(1, {3}), oracle::kron(rs, re));
    CHECK(oracle::max_abs(partial_trace(rho, {0}).matrix() - rs) < 1e-14);
    CHECK(oracle::max_abs(partial_trace(rho, {1}).matrix() - re) < 1e-14);
  }
  SUBCASE("maximally entangled pair") {
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const DenseOperator rho = projector(HilbertSpace::qubits(2), bell);
    CHECK(oracle::max_abs(partial_trace(rho, {1}).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
  }
  SUBCASE("GHZ(3) keeping two qubits") {
    Vector ghz = Vector::Zero(8);
    ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
    const DenseOperator red = partial_trace(projector(HilbertSpace::qubits(3), ghz), {0, 1});
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = expected(3, 3) = 0.5;
    CHECK(oracle::max_abs(red.matrix() - expected) < 1e-15);
  }
  SUBCASE("trace is preserved") {
    for (std::size_t n = 1; n <= 6; ++n) {
      const HilbertSpace s = HilbertSpace::qubits(n);
      const DenseOperator rho(s, oracle::random_density(rng, static_cast<Eigen::Index>(s.dim())));
      std::set<std::size_t> keep;
      for (std::size_t i = 0; i < n; i += 2) keep.insert(i);
      CHECK(std::abs(partial_trace(rho, keep).trace() - rho.trace()) <= 1e-12);
    }
  }
}

TEST_CASE("uhlmann fidelity") {
  std::mt19937_64 rng(4);
  const DenseOperator rho(HilbertSpace::qubits(2), oracle::random_density(rng, 4));
  CHECK(uhlmann_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));

  Vector a = Vector::Zero(2), b = Vector::Zero(2);
  a(0) = 1.0;
  b(1) = 1.0;
  const HilbertSpace q = HilbertSpace::qubits(1);
  CHECK(uhlmann_fidelity(projector(q, a), projector(q, b)) == doctest::Approx(0.0).epsilon(1e-12));

  Vector psi = Vector::Random(4), phi = Vector::Random(4);
  psi.normalize();
  phi.normalize();
  const HilbertSpace two = HilbertSpace::qubits(2);
  const double direct = std::abs(psi.dot(phi));
  CHECK(uhlmann_fidelity(projector(two, psi), projector(two, phi)) == doctest::Approx(direct).epsilon(1e-8));

  const DenseOperator tau(two, oracle::random_density(rng, 4));
  CHECK(uhlmann_fidelity(rho, tau) == doctest::Approx(uhlmann_fidelity(tau, rho)).epsilon(1e-10));
  CHECK_THROWS_AS(uhlmann_fidelity(rho, DenseOperator(two, Matrix::Identity(4, 4))), Error);
}

TEST_CASE("pauli strings") {
  const PauliString p("XIZ");
  CHECK(p.size() == 3);
  CHECK(p.weight() == 2);
  CHECK(p.support() == std::vector<std::size_t>{0, 2});
  CHECK(oracle::max_abs(p.matrix() - oracle::pauli_string("XIZ")) == 0.0);
  CHECK(PauliString::single(3, 1, 2).str() == "IYI");
  CHECK(PauliString::identity(2).is_identity());
  CHECK_THROWS_AS(PauliString("XQ"), Error);

  std::mt19937_64 rng(6);
  const Matrix h = oracle::random_hermitian(rng, 8);
  Matrix rebuilt = Matrix::Zero(8, 8);
  for (const auto& [ps, c] : pauli_decompose(h, 3)) rebuilt += c * ps.matrix();
  CHECK(oracle::max_abs(rebuilt - h) < 1e-13);
}

TEST_CASE("operators round-trip through json") {
  std::mt19937_64 rng(7);
  const DenseOperator op(HilbertSpace::environment({3}), oracle::random_hermitian(rng, 3));
  const DenseOperator back = operator_from_json(to_json(op), FactorKind::environment);
  CHECK(max_distance(op, back) < 1e-10);
}
