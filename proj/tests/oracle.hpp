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

// Reference implementations used only by the tests. Everything here is
// written from scratch on plain Eigen matrices so that a bug in the library
// cannot hide behind the same bug in its checker.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

inline M pauli(int j) {
  M m(2, 2);
  switch (j) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, C(0, -1), C(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline M kron(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

/// Tensor product of single-qubit Paulis given as a label string.
inline M pauli_string(const std::string& labels) {
  M out = M::Identity(1, 1);
  for (char c : labels) out = kron(out, pauli(c == 'I' ? 0 : c == 'X' ? 1 : c == 'Y' ? 2 : 3));
  return out;
}

/// exp(m) by scaling and squaring of a truncated Taylor series.
inline M expm(const M& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.25) {
    scaled *= 0.5;
    ++squarings;
  }
  const M a = m / std::pow(2.0, squarings);
  M term = M::Identity(m.rows(), m.cols());
  M sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline M propagator(const M& h, double t) { return expm(C(0, -t) * h); }

inline double max_abs(const M& m) { return m.cwiseAbs().maxCoeff(); }

inline M random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> nd;
  M g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = C(nd(rng), nd(rng));
  }
  return 0.5 * (g + g.adjoint());
}

inline M random_density(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> nd;
  M g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = C(nd(rng), nd(rng));
  }
  M rho = g * g.adjoint();
  return rho / rho.trace();
}

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::Vector3d v(nd(rng), nd(rng), nd(rng));
  return v.normalized();
}

inline M sigma_n(const Eigen::Vector3d& n) { return n.x() * pauli(1) + n.y() * pauli(2) + n.z() * pauli(3); }

/// Permutation operator moving qubit a to position perm[a] on n qubits,
/// tensored with the identity on an environment of dimension env_dim.
inline M qubit_permutation(const std::vector<std::size_t>& perm, Eigen::Index env_dim) {
  const std::size_t n = perm.size();
  const Eigen::Index sys = Eigen::Index{1} << n;
  M p = M::Zero(sys, sys);
  for (Eigen::Index x = 0; x < sys; ++x) {
    Eigen::Index y = 0;
    for (std::size_t a = 0; a < n; ++a) {
      const Eigen::Index bit = (x >> (n - 1 - a)) & 1;
      y |= bit << (n - 1 - perm[a]);
    }
    p(y, x) = 1.0;
  }
  return kron(p, M::Identity(env_dim, env_dim));
}

/// (1/N!) sum over all qubit permutations of P H P^dagger.
inline M permutation_average(const M& h, std::size_t n, Eigen::Index env_dim) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  M sum = M::Zero(h.rows(), h.cols());
  double count = 0.0;
  do {
    const M p = qubit_permutation(perm, env_dim);
    sum += p * h * p.adjoint();
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / count;
}

/// QFI from the symmetric logarithmic derivative, given rho and d rho / d theta.
inline double sld_qfi(const M& rho, const M& drho) {
  Eigen::SelfAdjointEigenSolver<M> es(rho);
  const M u = es.eigenvectors();
  const M d = u.adjoint() * drho * u;
  double f = 0.0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) {
    for (Eigen::Index l = 0; l < rho.rows(); ++l) {
      const double s = es.eigenvalues()(k) + es.eigenvalues()(l);
      if (s > 1e-12) f += 2.0 * std::norm(d(k, l)) / s;
    }
  }
  return f;
}

/// Dephased N-qubit GHZ state and its omega-derivative for gaussian noise:
/// the off-diagonal corner picks up exp(-i N omega t) exp(-(N t sigma)^2 / 2).
inline std::pair<M, M> dephased_ghz(std::size_t n, double sigma, double t, double omega) {
  const Eigen::Index d = Eigen::Index{1} << n;
  const double nn = static_cast<double>(n);
  const C gamma = std::exp(C(0, -nn * omega * t)) * std::exp(-0.5 * nn * nn * t * t * sigma * sigma);
  M rho = M::Zero(d, d), drho = M::Zero(d, d);
  rho(0, 0) = rho(d - 1, d - 1) = 0.5;
  rho(0, d - 1) = 0.5 * gamma;
  rho(d - 1, 0) = std::conj(rho(0, d - 1));
  drho(0, d - 1) = 0.5 * C(0, -nn * t) * gamma;
  drho(d - 1, 0) = std::conj(drho(0, d - 1));
  return {rho, drho};
}

/// Composite trapezoid rule on [a, b].
template <class F>
double trapezoid(F f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
  return s * h;
}

inline double gaussian_pdf(double x, double mu, double s) {
  const double z = (x - mu) / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace oracle
