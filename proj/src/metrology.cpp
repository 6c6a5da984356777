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

#include "ddm/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ddm/fit.hpp"
#include "ddm/parallel.hpp"
#include "ddm/rng.hpp"

namespace ddm {

double qfi_from_fidelity(const StateFamily& family, double theta, double dtheta) {
  require(dtheta > 0.0 && std::isfinite(dtheta), ErrorCode::invalid_argument, "finite-difference step must be positive");
  const DenseOperator lo = family(theta - 0.5 * dtheta);
  const DenseOperator hi = family(theta + 0.5 * dtheta);
  require(is_density_matrix(lo) && is_density_matrix(hi), ErrorCode::not_density_matrix,
          "state family returned an invalid density matrix");
  const double fid = uhlmann_fidelity(lo, hi);
  return std::max(0.0, 8.0 * (1.0 - fid) / (dtheta * dtheta));
}

CheckedQFI qfi_from_fidelity_checked(const StateFamily& family, double theta, double dtheta) {
  CheckedQFI c{};
  c.qfi = qfi_from_fidelity(family, theta, dtheta);
  c.qfi_half_step = qfi_from_fidelity(family, theta, 0.5 * dtheta);
  c.relative_change = std::abs(c.qfi - c.qfi_half_step) / std::max(c.qfi, 1e-300);
  return c;
}

double qfi_pure(const Vector& psi, const Matrix& generator) {
  require(psi.size() == generator.rows() && generator.rows() == generator.cols(), ErrorCode::dimension_mismatch,
          "state and generator dimensions differ");
  const Vector u = psi.normalized();
  const Vector gu = generator * u;
  const double m1 = u.dot(gu).real();
  const double m2 = gu.squaredNorm();
  return std::max(0.0, 4.0 * (m2 - m1 * m1));
}

QFIResult qfi_ghz(std::size_t n, const NoiseDistribution& p, double t) {
  require(n >= 1, ErrorCode::invalid_argument, "at least one qubit is required");
  require(t >= 0.0 && std::isfinite(t), ErrorCode::invalid_argument, "time must be finite and non-negative");
  const double nt = static_cast<double>(n) * t;
  const double g = std::abs(p.characteristic(nt));
  QFIResult r;
  r.n = n;
  r.time = t;
  r.qfi = nt * nt * g * g;
  r.qfi_per_time = t > 0.0 ? r.qfi / t : 0.0;
  return r;
}

QFIResult qfi_ghz_gaussian(std::size_t n, double sigma, double t) {
  return qfi_ghz(n, NoiseDistribution::gaussian(0.0, sigma), t);
}

MaybeUnbounded classical_fisher(const NoiseDistribution& p) {
  using boost::math::quadrature::gauss_kronrod;
  if (p.kind() == NoiseKind::tabulated) {
    const auto& x = p.grid();
    const auto& v = p.values();
    const double vmax = *std::max_element(v.begin(), v.end());
    // A density that does not vanish at the edge of its support jumps to zero there.
    if (v.front() > 1e-8 * vmax || v.back() > 1e-8 * vmax) return MaybeUnbounded::infinite();
    const std::size_t n = x.size();
    std::vector<double> integrand(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double d = (v[i + 1] - v[i - 1]) / (x[i + 1] - x[i - 1]);
      if (v[i] <= 0.0) {
        if (std::abs(d) > 1e-12 * vmax) return MaybeUnbounded::infinite();
        continue;
      }
      integrand[i] = d * d / v[i];
    }
    double total = 0.0;
    for (std::size_t i = 1; i < n; ++i) total += 0.5 * (integrand[i] + integrand[i - 1]) * (x[i] - x[i - 1]);
    return MaybeUnbounded::finite(total);
  }
  if (p.is_discrete()) return MaybeUnbounded::infinite();
  for (const auto& c : p.components()) {
    if (c.sigma == 0.0) return MaybeUnbounded::infinite();
  }
  if (p.components().size() == 1) {
    const double s = p.components().front().sigma;
    return MaybeUnbounded::finite(1.0 / (s * s));
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& c : p.components()) {
    lo = std::min(lo, c.mean - 14.0 * c.sigma);
    hi = std::max(hi, c.mean + 14.0 * c.sigma);
  }
  auto f = [&](double x) {
    double dens = 0.0, deriv = 0.0;
    for (const auto& c : p.components()) {
      const double z = (x - c.mean) / c.sigma;
      const double g = c.weight * std::exp(-0.5 * z * z) / (c.sigma * std::sqrt(2.0 * std::numbers::pi));
      dens += g;
      deriv -= g * z / c.sigma;
    }
    return dens > 1e-300 ? deriv * deriv / dens : 0.0;
  };
  constexpr int kPieces = 64;
  double total = 0.0;
  for (int i = 0; i < kPieces; ++i) {
    const double a = lo + (hi - lo) * i / kPieces;
    const double b = lo + (hi - lo) * (i + 1) / kPieces;
    total += gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-12);
  }
  return MaybeUnbounded::finite(total);
}

MaybeUnbounded parallel_bound(std::size_t n, const NoiseDistribution& p) {
  const MaybeUnbounded f = classical_fisher(p);
  if (f.unbounded) return f;
  return MaybeUnbounded::finite(static_cast<double>(n) * std::sqrt(f.value));
}

OptimalTime maximize_rate(const std::function<double(double)>& rate, double t_max) {
  require(t_max > 0.0 && std::isfinite(t_max), ErrorCode::invalid_argument, "search interval must be positive");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = t_max;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = rate(c), fd = rate(d);
  while (b - a > 1e-10) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = rate(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = rate(d);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, rate(t), false};
}

OptimalTime optimal_time(std::size_t n, double sigma) {
  require(n >= 1, ErrorCode::invalid_argument, "at least one qubit is required");
  require(sigma >= 0.0 && std::isfinite(sigma), ErrorCode::invalid_argument, "sigma must be finite and non-negative");
  if (sigma == 0.0) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), true};
  const auto nn = static_cast<double>(n);
  return maximize_rate([&](double t) { return qfi_ghz_gaussian(n, sigma, t).qfi_per_time; }, 10.0 / (nn * sigma));
}

QFIResult local_fluctuation_rate(std::size_t n, double sigma) {
  require(sigma > 0.0, ErrorCode::invalid_argument, "sigma must be positive");
  const double sigma_bar = sigma / std::sqrt(static_cast<double>(n));
  const OptimalTime opt = optimal_time(n, sigma_bar);
  QFIResult r;
  r.n = n;
  r.time = opt.t_opt;
  r.qfi_per_time = opt.rate;
  r.qfi = opt.rate * opt.t_opt;
  return r;
}

VarianceCheck sample_mean_coupling(std::size_t n, double sigma, std::size_t draws, std::uint64_t seed,
                                   std::size_t threads) {
  require(n >= 1 && draws >= 2, ErrorCode::invalid_argument, "need at least one site and two draws");
  require(sigma > 0.0, ErrorCode::invalid_argument, "sigma must be positive");
  std::vector<double> samples(draws);
  parallel_for(draws, threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    std::normal_distribution<double> dist(0.0, sigma);
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) sum += dist(rng);
    samples[i] = sum / static_cast<double>(n);
  });
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(draws);
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  VarianceCheck v;
  v.draws = draws;
  v.empirical_std = std::sqrt(ss / static_cast<double>(draws - 1));
  v.expected_std = sigma / std::sqrt(static_cast<double>(n));
  v.standard_error = v.expected_std / std::sqrt(2.0 * static_cast<double>(draws - 1));
  v.within_three_se = std::abs(v.empirical_std - v.expected_std) <= 3.0 * v.standard_error;
  return v;
}

nlohmann::json ScalingFit::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < n.size(); ++i) pts.push_back({{"N", n[i]}, {"rate", rate[i]}});
  return {{"beta", beta}, {"residual", residual}, {"points", std::move(pts)}};
}

ScalingFit fit_scaling(const std::vector<double>& n, const std::vector<double>& rate) {
  require(n.size() == rate.size(), ErrorCode::invalid_argument, "scaling fit needs matching N and rate lists");
  require(n.size() >= 4, ErrorCode::invalid_argument, "scaling fit needs at least four values of N");
  const LineFit f = fit_loglog(n, rate);
  return {n, rate, f.slope, f.residual};
}

ScalingFit scaling_sweep(const std::vector<std::size_t>& n_values, ScalingModel model, double sigma, double t,
                         std::size_t threads) {
  require(n_values.size() >= 4, ErrorCode::invalid_argument, "scaling sweep needs at least four values of N");
  std::vector<double> ns(n_values.size()), rates(n_values.size());
  parallel_for(n_values.size(), threads, [&](std::size_t i) {
    const std::size_t n = n_values[i];
    ns[i] = static_cast<double>(n);
    switch (model) {
      case ScalingModel::noiseless:
        rates[i] = qfi_ghz_gaussian(n, 0.0, t).qfi;
        break;
      case ScalingModel::collective:
        rates[i] = optimal_time(n, sigma).rate;
        break;
      case ScalingModel::local:
        rates[i] = local_fluctuation_rate(n, sigma).qfi_per_time;
        break;
    }
  });
  return fit_scaling(ns, rates);
}

PrecisionEstimate cramer_rao(double qfi, double repetitions) {
  require(qfi > 0.0, ErrorCode::invalid_argument, "Fisher information must be positive");
  require(repetitions >= 1.0, ErrorCode::invalid_argument, "at least one repetition is required");
  return {1.0 / std::sqrt(repetitions * qfi), repetitions, 0.0};
}

PrecisionEstimate cramer_rao_total_time(double qfi, double total_time, double t_opt) {
  require(t_opt > 0.0 && total_time >= t_opt, ErrorCode::invalid_argument, "total time must cover one run");
  PrecisionEstimate p = cramer_rao(qfi, total_time / t_opt);
  p.total_time = total_time;
  return p;
}

SystematicFloor systematic_error_floor(double prior_width, double ell) {
  require(prior_width >= 0.0 && std::isfinite(prior_width), ErrorCode::invalid_argument,
          "prior width must be finite and non-negative");
  if (ell == 0.0) return {0.0, true};
  return {prior_width * std::abs(ell), false};
}

}  // namespace ddm
