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

#include "ddm/dynamics.hpp"
#include "oracle.hpp"

using namespace ddm;

namespace {

DenseOperator env(const Matrix& m) { return {HilbertSpace::environment({static_cast<std::size_t>(m.rows())}), m}; }

SEHamiltonian transverse(std::mt19937_64& rng) {
  const DenseOperator z = DenseOperator::zero(HilbertSpace::environment({2}));
  return single_qubit(1.0, {0, 0.6, 0.3, 0},
                      {DenseOperator::identity(HilbertSpace::environment({2})), env(oracle::random_hermitian(rng, 2)),
                       env(oracle::random_hermitian(rng, 2)), z});
}

}  // namespace

TEST_CASE("noise distributions") {
  SUBCASE("gaussian moments and characteristic function") {
    const NoiseDistribution g = NoiseDistribution::gaussian(0.3, 0.7);
    CHECK(g.mean() == doctest::Approx(0.3));
    CHECK(g.variance() == doctest::Approx(0.49));
    const Complex phi = g.characteristic(1.2);
    const Complex expected = std::exp(Complex(0, -0.36)) * std::exp(-0.5 * 0.49 * 1.44);
    CHECK(std::abs(phi - expected) < 1e-14);
    CHECK(g.density(0.3) == doctest::Approx(oracle::gaussian_pdf(0.3, 0.3, 0.7)));
  }
  SUBCASE("discrete") {
    const NoiseDistribution d = NoiseDistribution::discrete({-1.0, 2.0}, {0.25, 0.75});
    CHECK(d.is_discrete());
    CHECK(d.mean() == doctest::Approx(1.25));
    CHECK(d.variance() == doctest::Approx(0.25 + 3.0 - 1.5625));
    CHECK(std::abs(d.characteristic(0.5) - (0.25 * std::exp(Complex(0, 0.5)) + 0.75 * std::exp(Complex(0, -1.0)))) <
          1e-14);
    CHECK_THROWS_AS(d.density(0.0), Error);
    CHECK_THROWS_AS(NoiseDistribution::discrete({0.0, 1.0}, {0.5, 0.6}), Error);
  }
  SUBCASE("tabulated triangle") {
    std::vector<double> x, v;
    for (int i = 0; i <= 200; ++i) {
      const double xi = -1.0 + 0.01 * i;
      x.push_back(xi);
      v.push_back(1.0 - std::abs(xi));
    }
    const NoiseDistribution t = NoiseDistribution::tabulated(x, v);
    CHECK(t.mean() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t.variance() == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
    // Fourier transform of the triangle: (sin(s/2) / (s/2))^2.
    const double s = 2.0;
    CHECK(t.characteristic(s).real() == doctest::Approx(std::pow(std::sin(1.0) / 1.0, 2)).epsilon(1e-4));
    CHECK_THROWS_AS(NoiseDistribution::tabulated({0.0, 1.0}, {1.0, 3.0}), Error);
    CHECK_THROWS_AS(NoiseDistribution::tabulated({0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}), Error);
  }
  SUBCASE("scaling") {
    const NoiseDistribution g = NoiseDistribution::gaussian(1.0, 0.5).scaled(3.0);
    CHECK(g.mean() == doctest::Approx(3.0));
    CHECK(std::sqrt(g.variance()) == doctest::Approx(1.5));
  }
  SUBCASE("equally gapped spectrum") {
    const NoiseDistribution e = NoiseDistribution::equally_gapped(0.3, 0.7, {0.5, 0.5});
    REQUIRE(e.components().size() == 2);
    CHECK(e.components()[1].mean == doctest::Approx(1.0));
  }
}

TEST_CASE("convolution") {
  SUBCASE("gaussians add in quadrature") {
    const NoiseDistribution c = convolve(NoiseDistribution::gaussian(1.0, 0.3), NoiseDistribution::gaussian(-0.5, 0.4));
    CHECK(c.mean() == doctest::Approx(0.5));
    CHECK(std::sqrt(c.variance()) == doctest::Approx(0.5));
  }
  SUBCASE("characteristic functions multiply") {
    const NoiseDistribution a = NoiseDistribution::discrete({0.0, 1.0}, {0.3, 0.7});
    const NoiseDistribution b = NoiseDistribution::mixture({{0.5, -1.0, 0.2}, {0.5, 2.0, 0.0}});
    const NoiseDistribution c = convolve(a, b);
    for (double s : {0.1, 0.7, 2.3}) {
      CHECK(std::abs(c.characteristic(s) - a.characteristic(s) * b.characteristic(s)) < 1e-13);
    }
  }
  SUBCASE("tabulated uniforms give a triangle") {
    std::vector<double> x, v;
    for (int i = 0; i <= 400; ++i) {
      x.push_back(-0.5 - 1e-3 + (1.0 + 2e-3) * i / 400.0);
      v.push_back(1.0);
    }
    // Tiny ramps at the edges keep the density continuous.
    v.front() = v.back() = 0.0;
    double area = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) area += 0.5 * (v[i] + v[i - 1]) * (x[i] - x[i - 1]);
    for (double& vi : v) vi /= area;
    const NoiseDistribution u = NoiseDistribution::tabulated(x, v);
    const NoiseDistribution c = convolve(u, u);
    CHECK(c.density(0.0) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(c.density(0.5) == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(c.variance() == doctest::Approx(2.0 / 12.0).epsilon(1e-2));
  }
}

TEST_CASE("pulsed evolution matches the brute-force product") {
  std::mt19937_64 rng(41);
  const SEHamiltonian h = transverse(rng);
  const PulseSchedule cycle = PulseSchedule::from_frames({pauli(3), pauli(0)}, {0.0, 0.5, 1.0});
  const PulsedEvolution pe{h, cycle, 3, 1.2};
  const Matrix hm = h.matrix().matrix();
  Matrix u = Matrix::Identity(hm.rows(), hm.cols());
  const PulseSchedule one = cycle.rescaled(1.2 / 3.0);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < one.intervals(); ++i) {
      const Matrix gate = oracle::kron(one.gates()[i].matrix(), Matrix::Identity(2, 2));
      u = oracle::propagator(hm, one.times()[i + 1] - one.times()[i]) * gate * u;
    }
  }
  CHECK(oracle::max_abs(exact_pulsed_unitary(pe).matrix() - u) < 1e-10);
}

TEST_CASE("trotter convergence") {
  std::mt19937_64 rng(42);
  const SEHamiltonian h = transverse(rng);
  const PulseSchedule cycle = PulseSchedule::from_frames({pauli(3), pauli(0)}, {0.0, 0.5, 1.0});
  const std::vector<std::size_t> grid{16, 32, 64, 128, 256, 512, 1024};
  const ConvergenceReport rep = trotter_convergence(h, cycle, 1.0, grid);
  REQUIRE(rep.points.size() == grid.size());
  for (std::size_t i = 1; i < rep.points.size(); ++i) CHECK(rep.points[i].error < rep.points[i - 1].error);
  CHECK(rep.fitted_order == doctest::Approx(-1.0).epsilon(0.1));
  CHECK(rep.points.back().error < 1e-2);

  SUBCASE("thread count does not change the errors") {
    const ConvergenceReport par = trotter_convergence(h, cycle, 1.0, grid, 3);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(par.points[i].error == rep.points[i].error);
  }
  SUBCASE("a noise-free Hamiltonian has no error") {
    const SEHamiltonian quiet(1.0, 1, EnvModel::common, {2});
    const ConvergenceReport q = trotter_convergence(quiet, cycle, 1.0, {4, 8});
    for (const auto& p : q.points) CHECK(p.error < 1e-12);
  }
}

TEST_CASE("parallel-noise channel") {
  SUBCASE("gaussian GHZ coherence") {
    const ParallelNoiseChannel ch{3, NoiseDistribution::gaussian(0.0, 0.4), 0.8, 1.0};
    CHECK(std::abs(ghz_coherence(ch)) == doctest::Approx(std::exp(-0.5 * std::pow(3 * 0.8 * 0.4, 2))));
  }
  SUBCASE("output is a density matrix with the dephased corner") {
    std::mt19937_64 rng(43);
    const ParallelNoiseChannel ch{2, NoiseDistribution::mixture({{0.4, 0.1, 0.3}, {0.6, -0.2, 0.1}}), 1.3, 0.7};
    const DenseOperator rho(HilbertSpace::qubits(2), oracle::random_density(rng, 4));
    const DenseOperator out = channel_output(ch, rho);
    CHECK(std::abs(out.trace() - 1.0) < 1e-12);
    CHECK(out.is_hermitian());
    Eigen::SelfAdjointEigenSolver<Matrix> es(out.matrix());
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(out.matrix()(i, i) - rho.matrix()(i, i)) < 1e-14);

    const Matrix ghz = ghz_state(2).matrix();
    const Matrix full = channel_output(ch, ghz_state(2)).matrix();
    const Eigen::Matrix2cd two = ghz_channel_output(ch, ghz_state_2d());
    CHECK(std::abs(full(0, 3) - two(0, 1)) < 1e-14);
    CHECK(std::abs(ghz(0, 3)) == doctest::Approx(0.5));
  }
  SUBCASE("agrees with the dephased GHZ reference") {
    const ParallelNoiseChannel ch{4, NoiseDistribution::gaussian(0.0, 0.25), 0.6, 1.1};
    const auto [rho, drho] = oracle::dephased_ghz(4, 0.25, 0.6, 1.1);
    (void)drho;
    CHECK(oracle::max_abs(channel_output(ch, ghz_state(4)).matrix() - rho) < 1e-12);
  }
}

TEST_CASE("revival of an equally gapped spectrum") {
  const double gap = 0.7, c_bar = 1.3;
  const double t = revival_time(gap, c_bar);
  CHECK(t == doctest::Approx(2.0 * std::numbers::pi / (gap * c_bar)));
  const NoiseDistribution p = NoiseDistribution::equally_gapped(0.3, gap, {0.1, 0.2, 0.4, 0.2, 0.1}).scaled(c_bar);
  for (std::size_t n = 1; n <= 4; ++n) {
    const double tn = t / static_cast<double>(n);
    const ParallelNoiseChannel ch{n, p, tn, 1.0};
    CHECK(std::abs(ghz_coherence(ch)) == doctest::Approx(1.0).epsilon(1e-10));
    const ParallelNoiseChannel mid{n, p, 0.5 * tn, 1.0};
    CHECK(std::abs(ghz_coherence(mid)) < 0.99);
  }
}
