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

#include "ddm/metrology.hpp"
#include "oracle.hpp"

using namespace ddm;

namespace {

StateFamily dephased_family(std::size_t n, const NoiseDistribution& p, double t) {
  return [n, p, t](double omega) { return channel_output({n, p, t, omega}, ghz_state(n)); };
}

// Fisher information of a density by direct quadrature of p'^2 / p.
double fisher_reference(const std::function<double(double)>& pdf, double lo, double hi) {
  const double h = 1e-5;
  return oracle::trapezoid(
      [&](double x) {
        const double p = pdf(x);
        if (p < 1e-300) return 0.0;
        const double d = (pdf(x + h) - pdf(x - h)) / (2 * h);
        return d * d / p;
      },
      lo, hi, 200000);
}

}  // namespace

TEST_CASE("qfi of the dephased GHZ state") {
  for (std::size_t n : {1, 2, 3}) {
    for (double t : {0.3, 1.0}) {
      const double sigma = 0.4, omega = 0.9;
      const auto [rho, drho] = oracle::dephased_ghz(n, sigma, t, omega);
      const double reference = oracle::sld_qfi(rho, drho);
      const double closed = qfi_ghz_gaussian(n, sigma, t).qfi;
      CHECK(closed == doctest::Approx(reference).epsilon(1e-9));
      const CheckedQFI numeric =
          qfi_from_fidelity_checked(dephased_family(n, NoiseDistribution::gaussian(0, sigma), t), omega);
      CHECK(numeric.qfi == doctest::Approx(reference).epsilon(5e-3));
      CHECK(numeric.relative_change < 2e-3);
    }
  }
}

TEST_CASE("pure-state qfi") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const Vector psi = ghz_state(n).matrix().col(0) * std::sqrt(2.0);
    Matrix s3 = Matrix::Zero(psi.size(), psi.size());
    for (std::size_t a = 0; a < n; ++a) s3 += embed(pauli(3), a, HilbertSpace::qubits(n)).matrix();
    CHECK(qfi_pure(psi, kSignalGeneratorScale * s3) == doctest::Approx(static_cast<double>(n * n)));
    // A product state gives only N.
    Vector plus = Vector::Constant(psi.size(), 1.0 / std::sqrt(static_cast<double>(psi.size())));
    CHECK(qfi_pure(plus, kSignalGeneratorScale * s3) == doctest::Approx(static_cast<double>(n)));
  }
}

TEST_CASE("noiseless qfi grows as N^2 t^2") {
  CHECK(qfi_ghz_gaussian(5, 0.0, 2.0).qfi == doctest::Approx(100.0));
  CHECK(qfi_ghz(3, NoiseDistribution::discrete({0.0}, {1.0}), 1.5).qfi == doctest::Approx(20.25));
}

TEST_CASE("classical fisher information") {
  CHECK(classical_fisher(NoiseDistribution::gaussian(0.2, 0.5)).value == doctest::Approx(4.0));
  CHECK(classical_fisher(NoiseDistribution::discrete({0.0, 1.0}, {0.5, 0.5})).unbounded);
  CHECK(classical_fisher(NoiseDistribution::mixture({{0.5, 0.0, 1.0}, {0.5, 1.0, 0.0}})).unbounded);

  SUBCASE("two-component mixture against quadrature") {
    const NoiseDistribution m = NoiseDistribution::mixture({{0.3, -1.0, 0.5}, {0.7, 1.5, 0.8}});
    const double ref = fisher_reference(
        [](double x) { return 0.3 * oracle::gaussian_pdf(x, -1.0, 0.5) + 0.7 * oracle::gaussian_pdf(x, 1.5, 0.8); }, -10,
        12);
    const MaybeUnbounded f = classical_fisher(m);
    REQUIRE_FALSE(f.unbounded);
    CHECK(f.value == doctest::Approx(ref).epsilon(1e-6));
  }
  SUBCASE("tabulated gaussian approaches 1 / sigma^2") {
    std::vector<double> x, v;
    const double s = 0.7;
    for (int i = 0; i <= 4000; ++i) {
      x.push_back(-12 * s + 24 * s * i / 4000.0);
      v.push_back(oracle::gaussian_pdf(x.back(), 0.0, s));
    }
    double area = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) area += 0.5 * (v[i] + v[i - 1]) * (x[i] - x[i - 1]);
    for (double& vi : v) vi /= area;
    const MaybeUnbounded f = classical_fisher(NoiseDistribution::tabulated(x, v));
    REQUIRE_FALSE(f.unbounded);
    CHECK(f.value == doctest::Approx(1.0 / (s * s)).epsilon(1e-3));
  }
  SUBCASE("a density with a jump is unbounded") {
    CHECK(classical_fisher(NoiseDistribution::tabulated({0.0, 0.5, 1.0}, {1.0, 1.0, 1.0})).unbounded);
  }
}

TEST_CASE("parallel bound") {
  const MaybeUnbounded b = parallel_bound(4, NoiseDistribution::gaussian(0, 0.5));
  CHECK(b.value == doctest::Approx(8.0));
  CHECK(parallel_bound(3, NoiseDistribution::discrete({0.0, 1.0}, {0.5, 0.5})).unbounded);

  SUBCASE("no time beats the bound") {
    for (std::size_t n : {1, 3, 8}) {
      for (double sigma : {0.3, 1.0}) {
        const double bound = parallel_bound(n, NoiseDistribution::gaussian(0, sigma)).value;
        for (int k = 1; k <= 200; ++k) {
          const double t = 0.05 * k / (static_cast<double>(n) * sigma);
          CHECK(qfi_ghz_gaussian(n, sigma, t).qfi_per_time <= bound);
        }
      }
    }
  }
}

TEST_CASE("optimal time") {
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::e);
  for (std::size_t n : {1, 2, 5, 16}) {
    for (double sigma : {0.5, 2.0}) {
      const double nn = static_cast<double>(n);
      const OptimalTime o = optimal_time(n, sigma);
      CHECK(o.t_opt == doctest::Approx(1.0 / (std::sqrt(2.0) * nn * sigma)).epsilon(1e-6));
      CHECK(o.rate == doctest::Approx(c * nn / sigma).epsilon(1e-10));
    }
  }
  CHECK(optimal_time(3, 0.0).unbounded);
  CHECK_THROWS_AS(optimal_time(0, 1.0), Error);
}

TEST_CASE("local fluctuations after symmetrization") {
  const QFIResult r = local_fluctuation_rate(16, 1.0);
  CHECK(r.qfi_per_time == doctest::Approx(27.45).epsilon(1e-3));
  CHECK(r.qfi_per_time == doctest::Approx(64.0 / std::sqrt(2.0 * std::numbers::e)).epsilon(1e-9));
}

TEST_CASE("mean coupling of independent sites") {
  const VarianceCheck v = sample_mean_coupling(16, 2.0, 10000, 99);
  CHECK(v.expected_std == doctest::Approx(0.5));
  CHECK(v.within_three_se);
  CHECK(std::abs(v.empirical_std - v.expected_std) <= 3 * v.standard_error);
  const VarianceCheck again = sample_mean_coupling(16, 2.0, 10000, 99, 3);
  CHECK(again.empirical_std == v.empirical_std);
  CHECK(sample_mean_coupling(16, 2.0, 10000, 100).empirical_std != v.empirical_std);
}

TEST_CASE("scaling exponents") {
  const std::vector<std::size_t> ns{1, 2, 4, 8, 16, 32, 64};
  CHECK(scaling_sweep(ns, ScalingModel::noiseless, 1.0).beta == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(scaling_sweep(ns, ScalingModel::collective, 1.0).beta == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(scaling_sweep(ns, ScalingModel::local, 1.0).beta == doctest::Approx(1.5).epsilon(1e-6));
  CHECK_THROWS_AS(fit_scaling({1, 2, 3}, {1, 2, 3}), Error);
  const ScalingFit f = fit_scaling({1, 2, 4, 8}, {3, 3 * std::pow(2, 1.7), 3 * std::pow(4, 1.7), 3 * std::pow(8, 1.7)});
  CHECK(f.beta == doctest::Approx(1.7));
  CHECK(f.residual < 1e-12);
}

TEST_CASE("precision estimates") {
  CHECK(cramer_rao(4.0, 25.0).delta_omega == doctest::Approx(0.1));
  const PrecisionEstimate p = cramer_rao_total_time(2.0, 50.0, 0.5);
  CHECK(p.repetitions == doctest::Approx(100.0));
  CHECK(p.delta_omega == doctest::Approx(1.0 / std::sqrt(200.0)));
  CHECK(p.total_time == 50.0);
  CHECK_THROWS_AS(cramer_rao(0.0, 1.0), Error);
}

TEST_CASE("systematic floor") {
  CHECK(systematic_error_floor(0.3, 2.0).floor == doctest::Approx(0.6));
  const SystematicFloor z = systematic_error_floor(0.3, 0.0);
  CHECK(z.trivial);
  CHECK(z.floor == 0.0);
}
