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

#include "ddm/reproduce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "ddm/decoupling.hpp"
#include "ddm/dynamics.hpp"
#include "ddm/fit.hpp"
#include "ddm/hamiltonian.hpp"
#include "ddm/metrology.hpp"
#include "ddm/parallel.hpp"
#include "ddm/rng.hpp"
#include "ddm/runner.hpp"

namespace ddm {
namespace {

constexpr const char* kNames[kCriteriaCount] = {
    "standard-form roundtrip",
    "exact decoupling of rank-2 noise",
    "first-order pulse convergence",
    "transverse-noise invariance",
    "GHZ gaussian rate constant",
    "parallel-noise bound",
    "super-SQL scaling under local fluctuations",
    "variance reduction of the mean coupling",
    "antisymmetric noise elimination",
    "correlated-noise chain scheme",
    "discrete-spectrum revival",
    "fidelity QFI against closed form",
    "determinism",
};

constexpr const char* kSlugs[kCriteriaCount] = {
    "standard_form", "exact_decoupling", "trotter", "transverse", "gaussian_constant", "bound",
    "local_scaling", "variance",      "antisymmetric", "correlated", "revival", "fidelity_qfi", "determinism",
};

std::string num(double x) { return format_number(x); }

std::string num(std::size_t x) { return std::to_string(x); }

// Each criterion draws from its own family of streams so adding cases to one
// never shifts another.
CounterRng case_rng(std::uint64_t seed, int criterion, std::size_t index) {
  return CounterRng(seed, static_cast<std::uint64_t>(criterion) * 1000000ULL + index);
}

double normal(CounterRng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

double uniform(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

DenseOperator random_hermitian(CounterRng& rng, std::size_t d) {
  Matrix g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return {HilbertSpace::environment({d}), Matrix(0.5 * (g + g.adjoint()))};
}

Eigen::Matrix3d random_rotation(CounterRng& rng) {
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return q.toRotationMatrix();
}

DenseOperator env_identity(std::size_t d) { return DenseOperator::identity(HilbertSpace::environment({d})); }

// ---------------------------------------------------------------------------

CriterionResult standard_form_roundtrip(const ReproduceOptions& o) {
  constexpr std::size_t kCases = 500;
  struct Row {
    std::size_t d;
    std::array<double, 3> b;
    double recon, ortho;
    bool sorted;
  };
  std::vector<Row> rows(kCases);
  parallel_for(kCases, o.threads, [&](std::size_t i) {
    CounterRng rng = case_rng(o.seed, 1, i);
    const std::size_t d = 2 + i % 3;
    std::array<double, 4> c{0.0, normal(rng), normal(rng), normal(rng)};
    std::array<DenseOperator, 4> a{env_identity(d), random_hermitian(rng, d), random_hermitian(rng, d),
                                   random_hermitian(rng, d)};
    const SEHamiltonian h = single_qubit(uniform(rng, 0.5, 2.0), c, a);
    const StandardForm sf = standard_form(h);
    Row r{d, sf.b, max_distance(sf.reconstruct(h, 0), h.noise_matrix()), 0.0,
          sf.b[0] >= sf.b[1] && sf.b[1] >= sf.b[2] && sf.b[2] >= 0.0};
    for (std::size_t j = 0; j < 3; ++j) {
      if (sf.b[j] == 0.0) continue;
      for (std::size_t k = 0; k < 3; ++k) {
        if (sf.b[k] == 0.0) continue;
        const double target = j == k ? 1.0 : 0.0;
        r.ortho = std::max(r.ortho, std::abs(hs_inner(sf.B[j], sf.B[k]) - target));
      }
    }
    rows[i] = r;
  });
  CsvTable t({"case", "env_dim", "b1", "b2", "b3", "reconstruction_error", "orthonormality_error", "sorted"});
  double recon = 0.0, ortho = 0.0;
  bool sorted = true;
  for (std::size_t i = 0; i < kCases; ++i) {
    const Row& r = rows[i];
    recon = std::max(recon, r.recon);
    ortho = std::max(ortho, r.ortho);
    sorted = sorted && r.sorted;
    t.row({num(i), num(r.d), num(r.b[0]), num(r.b[1]), num(r.b[2]), num(r.recon), num(r.ortho),
           r.sorted ? "true" : "false"});
  }
  const double tol = 1e-8 * o.tolerance_scale;
  CriterionResult res;
  res.passed = recon <= tol && ortho <= tol && sorted;
  res.detail = "cases=500 max_reconstruction_error=" + num(recon) + " max_orthonormality_error=" + num(ortho) +
               (sorted ? " sorted" : " unsorted");
  res.table = t.str();
  res.time_limit = 10.0;
  return res;
}

CriterionResult exact_decoupling(const ReproduceOptions& o) {
  constexpr std::size_t kCases = 200;
  struct Row {
    std::size_t d;
    double b1, b2, expected_r3, r3, noise, system, alignment;
    bool feasible;
  };
  std::vector<Row> rows(kCases);
  parallel_for(kCases, o.threads, [&](std::size_t i) {
    CounterRng rng = case_rng(o.seed, 2, i);
    const std::size_t d = 2 + i % 3;
    Eigen::Matrix3d rot = random_rotation(rng);
    // Resample until the noise plane is far enough from containing z.
    while (std::abs(rot.col(0).cross(rot.col(1)).z()) <= 1e-2) rot = random_rotation(rng);
    const Eigen::Vector3d n1 = rot.col(0), n2 = rot.col(1);
    const double b1 = uniform(rng, 1.0, 2.0), b2 = uniform(rng, 0.2, 0.9);
    // Orthonormal pair B1, B2 by Gram-Schmidt in the Hilbert-Schmidt product.
    DenseOperator g1 = random_hermitian(rng, d), g2 = random_hermitian(rng, d);
    const DenseOperator B1 = g1 * Complex(1.0 / hs_norm(g1));
    g2 -= B1 * Complex(hs_inner(B1, g2).real());
    const DenseOperator B2 = g2 * Complex(1.0 / hs_norm(g2));
    std::array<DenseOperator, 4> a{env_identity(d), {}, {}, {}};
    std::array<double, 4> c{0.0, 1.0, 1.0, 1.0};
    for (std::size_t j = 0; j < 3; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      a[j + 1] = B1 * Complex(b1 * n1(jj)) + B2 * Complex(b2 * n2(jj));
    }
    const double omega = uniform(rng, 0.5, 2.0);
    const SEHamiltonian h = single_qubit(omega, c, a);
    const DecouplingDirection dd = decoupling_direction(standard_form(h));
    const Eigen::Vector3d n3 = n1.cross(n2);
    Row r{d, b1, b2, std::abs(n3.z()), dd.r3, 0.0, 0.0, 0.0, dd.feasible};
    if (dd.feasible && dd.r) {
      const SEHamiltonian eff = apply_map(projection_map(*dd.r), h);
      r.noise = eff.noise_matrix().max_abs();
      r.system = max_distance(eff.signal_system_matrix(), sigma_n(*dd.r) * Complex(omega * dd.r3));
      r.alignment = 1.0 - std::abs(dd.r->vector().dot(n3));
    }
    rows[i] = r;
  });
  CsvTable t({"case", "env_dim", "b1", "b2", "r3_expected", "r3", "noise_residual", "system_error",
              "alignment_error", "feasible"});
  double noise = 0.0, system = 0.0, r3 = 0.0, align = 0.0;
  bool feasible = true;
  for (std::size_t i = 0; i < kCases; ++i) {
    const Row& r = rows[i];
    noise = std::max(noise, r.noise);
    system = std::max(system, r.system);
    r3 = std::max(r3, std::abs(r.r3 - r.expected_r3));
    align = std::max(align, r.alignment);
    feasible = feasible && r.feasible;
    t.row({num(i), num(r.d), num(r.b1), num(r.b2), num(r.expected_r3), num(r.r3), num(r.noise), num(r.system),
           num(r.alignment), r.feasible ? "true" : "false"});
  }
  const double tol = 1e-9 * o.tolerance_scale;
  CriterionResult res;
  res.passed = feasible && noise <= tol && system <= tol && r3 <= tol && align <= tol;
  res.detail = "cases=200 max_noise_residual=" + num(noise) + " max_system_error=" + num(system) +
               " max_r3_error=" + num(r3);
  res.table = t.str();
  res.time_limit = 10.0;
  return res;
}

CriterionResult trotter_convergence_check(const ReproduceOptions& o) {
  constexpr std::size_t kCases = 20;
  const std::vector<std::size_t> grid{16, 32, 64, 128, 256, 512, 1024};
  struct Family {
    const char* name;
    std::vector<int> frames;
  };
  const std::vector<Family> families{{"pi_z", {3, 0}}, {"pi_x", {1, 0}}, {"pi_y", {2, 0}}, {"twirl", {1, 2, 3, 0}}};
  struct Row {
    const char* schedule;
    double slope, first, last;
  };
  std::vector<Row> rows(kCases);
  // The grid points inside one case are independent; cases run in order.
  for (std::size_t i = 0; i < kCases; ++i) {
    CounterRng rng = case_rng(o.seed, 3, i);
    const std::size_t d = 2;
    std::array<double, 4> c{0.0, 0.5 * normal(rng), 0.5 * normal(rng), 0.5 * normal(rng)};
    std::array<DenseOperator, 4> a{env_identity(d), random_hermitian(rng, d), random_hermitian(rng, d),
                                   random_hermitian(rng, d)};
    const SEHamiltonian h = single_qubit(uniform(rng, 0.5, 1.5), c, a);
    const Family& fam = families[i % families.size()];
    std::vector<DenseOperator> frames;
    std::vector<double> times{0.0};
    for (std::size_t k = 0; k < fam.frames.size(); ++k) {
      frames.push_back(pauli(fam.frames[k]));
      times.push_back(static_cast<double>(k + 1) / static_cast<double>(fam.frames.size()));
    }
    const ConvergenceReport rep =
        trotter_convergence(h, PulseSchedule::from_frames(frames, times), 1.0, grid, o.threads);
    rows[i] = {fam.name, rep.fitted_order, rep.points.front().error, rep.points.back().error};
  }
  CsvTable t({"case", "schedule", "fitted_order", "error_m16", "error_m1024"});
  double worst = 0.0;
  for (std::size_t i = 0; i < kCases; ++i) {
    worst = std::max(worst, std::abs(rows[i].slope + 1.0));
    t.row({num(i), rows[i].schedule, num(rows[i].slope), num(rows[i].first), num(rows[i].last)});
  }
  CriterionResult res;
  res.passed = worst <= 0.15 * o.tolerance_scale;
  res.detail = "cases=20 grid=16..1024 max_slope_deviation=" + num(worst);
  res.table = t.str();
  res.time_limit = 60.0;
  return res;
}

CriterionResult transverse_invariance(const ReproduceOptions& o) {
  constexpr std::size_t kCases = 50;
  CsvTable t({"case", "env_dim", "omega", "r3", "system_error", "noise_residual"});
  double worst = 0.0;
  for (std::size_t i = 0; i < kCases; ++i) {
    CounterRng rng = case_rng(o.seed, 4, i);
    const std::size_t d = 2 + i % 3;
    std::array<double, 4> c{0.0, normal(rng), normal(rng), 0.0};
    std::array<DenseOperator, 4> a{env_identity(d), random_hermitian(rng, d), random_hermitian(rng, d),
                                   DenseOperator::zero(HilbertSpace::environment({d}))};
    const double omega = uniform(rng, 0.5, 2.0);
    const SEHamiltonian h = single_qubit(omega, c, a);
    const DecouplingDirection dd = decoupling_direction(standard_form(h));
    const SEHamiltonian eff = apply_map(projection_map(UnitVector3::z_axis()), h);
    const double sys = max_distance(eff.signal_matrix(), h.signal_matrix());
    const double noise = eff.noise_matrix().max_abs();
    worst = std::max({worst, sys, noise, std::abs(dd.r3 - 1.0)});
    t.row({num(i), num(d), num(omega), num(dd.r3), num(sys), num(noise)});
  }
  CriterionResult res;
  res.passed = worst <= 1e-12 * o.tolerance_scale;
  res.detail = "cases=50 max_error=" + num(worst);
  res.table = t.str();
  return res;
}

CriterionResult gaussian_constant(const ReproduceOptions& o) {
  CsvTable t({"N", "sigma", "t_opt", "rate", "expected", "relative_error"});
  double worst = 0.0;
  for (std::size_t n : {1, 2, 4, 8}) {
    for (double sigma : {0.5, 1.0, 2.0}) {
      const OptimalTime opt = optimal_time(n, sigma);
      const double expected = 0.4289 * static_cast<double>(n) / sigma;
      const double rel = std::abs(opt.rate - expected) / expected;
      worst = std::max(worst, rel);
      t.row({num(n), num(sigma), num(opt.t_opt), num(opt.rate), num(expected), num(rel)});
    }
  }
  CriterionResult res;
  res.passed = worst <= 0.01 * o.tolerance_scale;
  res.detail = "points=12 max_relative_error=" + num(worst);
  res.table = t.str();
  res.time_limit = 5.0;
  return res;
}

CriterionResult bound_check(const ReproduceOptions& o) {
  CsvTable t({"N", "sigma", "t", "qfi_rate", "bound", "margin"});
  const std::array<double, 4> sigmas{0.1, 0.5, 1.0, 2.0};
  double worst_margin = -std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0, bound_err = 0.0;
  std::size_t points = 0;
  const double target = std::exp(-0.5) / std::sqrt(2.0);
  for (std::size_t n = 1; n <= 8; ++n) {
    const double nn = static_cast<double>(n);
    for (double sigma : sigmas) {
      const double expected_bound = nn / sigma;
      const MaybeUnbounded bound = parallel_bound(n, NoiseDistribution::gaussian(0.0, sigma));
      bound_err = std::max(bound_err, bound.unbounded ? std::numeric_limits<double>::infinity()
                                                       : std::abs(bound.value - expected_bound) / expected_bound);
      for (int k = 0; k < 20; ++k) {
        const double time = 0.25 * (k + 1) / (nn * sigma);
        const double rate = qfi_ghz_gaussian(n, sigma, time).qfi_per_time;
        const double margin = rate - expected_bound;
        worst_margin = std::max(worst_margin, margin);
        ++points;
        t.row({num(n), num(sigma), num(time), num(rate), num(expected_bound), num(margin)});
      }
      const OptimalTime opt = optimal_time(n, sigma);
      worst_ratio = std::max(worst_ratio, std::abs(opt.rate / expected_bound - target));
    }
  }
  const double s = o.tolerance_scale;
  CriterionResult res;
  res.passed = points == 640 && worst_margin <= 1e-9 * s && worst_ratio <= 0.002 * s && bound_err <= 1e-12 * s;
  res.detail = "points=" + num(points) + " max_rate_minus_bound=" + num(worst_margin) +
               " max_ratio_deviation=" + num(worst_ratio);
  res.table = t.str();
  return res;
}

CriterionResult local_scaling(const ReproduceOptions& o) {
  constexpr double kSigma = 1.0;
  const std::vector<std::size_t> ns{2, 4, 8, 16, 32, 64};
  std::vector<double> rates(ns.size()), topt(ns.size());
  parallel_for(ns.size(), o.threads, [&](std::size_t i) {
    const std::size_t n = ns[i];
    const NoiseDistribution avg = site_average(NoiseDistribution::gaussian(0.0, kSigma), n);
    const double sd = std::sqrt(avg.variance());
    auto rate = [&](double t) {
      const StateFamily fam = [&](double omega) {
        const Eigen::Matrix2cd out = ghz_channel_output({n, avg, t, omega}, ghz_state_2d());
        return DenseOperator(HilbertSpace::qubits(1), Matrix(out));
      };
      return qfi_from_fidelity(fam, 0.0) / t;
    };
    const OptimalTime opt = maximize_rate(rate, 10.0 / (static_cast<double>(n) * sd));
    rates[i] = opt.rate;
    topt[i] = opt.t_opt;
  });
  CsvTable t({"N", "t_opt", "rate", "expected", "relative_error"});
  double worst = 0.0;
  std::vector<double> nd;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double nn = static_cast<double>(ns[i]);
    nd.push_back(nn);
    const double expected = std::pow(nn, 1.5) / (std::sqrt(2.0 * std::exp(1.0)) * kSigma);
    const double rel = std::abs(rates[i] - expected) / expected;
    worst = std::max(worst, rel);
    t.row({num(ns[i]), num(topt[i]), num(rates[i]), num(expected), num(rel)});
  }
  const ScalingFit fit = fit_scaling(nd, rates);
  const double s = o.tolerance_scale;
  CriterionResult res;
  res.passed = std::abs(fit.beta - 1.5) <= 0.05 * s && worst <= 0.005 * s;
  res.detail = "beta=" + num(fit.beta) + " max_relative_error=" + num(worst);
  res.table = t.str();
  res.time_limit = 5.0;
  return res;
}

CriterionResult variance_reduction(const ReproduceOptions& o) {
  CsvTable t({"N", "draws", "empirical_std", "expected_std", "standard_error", "deviation_in_se"});
  bool ok = true;
  std::string detail;
  for (std::size_t n : {4, 16}) {
    const VarianceCheck v = sample_mean_coupling(n, 1.0, 10000, o.seed, o.threads);
    const double z = std::abs(v.empirical_std - v.expected_std) / v.standard_error;
    ok = ok && z <= 3.0 * o.tolerance_scale;
    t.row({num(n), num(v.draws), num(v.empirical_std), num(v.expected_std), num(v.standard_error), num(z)});
    detail += (detail.empty() ? "" : " ") + std::string("N=") + num(n) + ":" + num(z) + "se";
  }
  CriterionResult res;
  res.passed = ok;
  res.detail = "draws=10000 " + detail;
  res.table = t.str();
  return res;
}

// Explicit average of the Hamiltonian matrix over all site permutations.
DenseOperator permutation_average(const SEHamiltonian& h) {
  std::vector<std::size_t> perm(h.sites());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  DenseOperator sum = DenseOperator::zero(h.space());
  std::size_t count = 0;
  do {
    sum += permute_sites(h, perm).matrix();
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum * Complex(1.0 / static_cast<double>(count));
}

CriterionResult antisymmetric(const ReproduceOptions& o) {
  CsvTable t({"case", "N", "c_bar", "noise_max_norm", "permutation_average_error"});
  double antisym = 0.0, oracle = 0.0;
  {
    CounterRng rng = case_rng(o.seed, 9, 0);
    const DenseOperator a = random_hermitian(rng, 2);
    const DenseOperator id = env_identity(2), zero = DenseOperator::zero(HilbertSpace::environment({2}));
    const SEHamiltonian h =
        n_qubit_common(1.0, {SiteCoupling{{0, 0, 0, 1.0}, {id, zero, zero, a}}, SiteCoupling{{0, 0, 0, -1.0}, {id, zero, zero, a}}});
    const SymmetrizeResult s = symmetrize(h);
    antisym = std::max(s.hamiltonian.noise_matrix().max_abs(), s.symmetric_noise.max_abs());
    const double err = max_distance(s.hamiltonian.matrix(), permutation_average(h));
    oracle = std::max(oracle, err);
    t.row({"antisymmetric", "2", num(s.c_bar), num(antisym), num(err)});
  }
  std::size_t idx = 1;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (int rep = 0; rep < 3; ++rep, ++idx) {
      CounterRng rng = case_rng(o.seed, 9, idx);
      const DenseOperator id = env_identity(2), zero = DenseOperator::zero(HilbertSpace::environment({2}));
      std::vector<SiteCoupling> sites;
      for (std::size_t a = 0; a < n; ++a) {
        sites.push_back({{0, 0, 0, normal(rng)}, {id, zero, zero, random_hermitian(rng, 2)}});
      }
      const SEHamiltonian h = n_qubit_common(uniform(rng, 0.5, 2.0), sites);
      const SymmetrizeResult s = symmetrize(h);
      const double err = max_distance(s.hamiltonian.matrix(), permutation_average(h));
      oracle = std::max(oracle, err);
      t.row({"random_" + num(idx), num(n), num(s.c_bar), num(s.hamiltonian.noise_matrix().max_abs()), num(err)});
    }
  }
  const double s = o.tolerance_scale;
  CriterionResult res;
  res.passed = antisym <= 1e-12 * s && oracle <= 1e-10 * s;
  res.detail = "antisymmetric_noise=" + num(antisym) + " max_permutation_average_error=" + num(oracle);
  res.table = t.str();
  return res;
}

CriterionResult correlated_chain(const ReproduceOptions& o) {
  constexpr std::size_t kN = 6;
  CounterRng rng = case_rng(o.seed, 10, 0);
  SEHamiltonian h(1.0, kN, EnvModel::common, {2});
  for (std::size_t a = 0; a + 1 < kN; ++a) {
    std::string labels(kN, 'I');
    labels[a] = labels[a + 1] = 'Z';
    h.add_term(normal(rng), PauliString(labels), random_hermitian(rng, 2));
  }
  const CorrelatedScheme scheme = correlated_scheme(kN, 1);
  const SEHamiltonian eff = scheme.apply(h);
  const double noise = eff.noise_matrix().max_abs();

  double kept = 0.0, total = 0.0;
  for (const auto& term : h.signal()) total += std::abs(term.weight);
  for (const auto& term : eff.signal()) kept += std::abs(term.weight);
  const double alpha = kept / total;

  const Matrix gen = kSignalGeneratorScale * eff.signal_system_matrix().matrix() / eff.omega();
  const DenseOperator ghz = ghz_state(kN);
  Eigen::SelfAdjointEigenSolver<Matrix> es(ghz.matrix());
  const Vector psi = es.eigenvectors().col(es.eigenvectors().cols() - 1);
  CsvTable t({"t", "qfi_pure", "qfi_fidelity", "expected", "relative_error"});
  double worst = 0.0;
  for (double time : {0.5, 1.0, 2.0}) {
    const double expected = std::pow(static_cast<double>(kN) / 2.0, 2) * time * time;
    const double pure = qfi_pure(psi, time * gen);
    const DenseOperator g(HilbertSpace::qubits(kN), time * gen);
    const StateFamily fam = [&](double theta) {
      return projector(HilbertSpace::qubits(kN), evolve(g, theta).matrix() * psi);
    };
    const double fid = qfi_from_fidelity(fam, 0.3);
    const double rel = std::max(std::abs(pure - expected), std::abs(fid - expected)) / expected;
    worst = std::max(worst, rel);
    t.row({num(time), num(pure), num(fid), num(expected), num(rel)});
  }
  const double s = o.tolerance_scale;
  CriterionResult res;
  res.passed = noise <= 1e-10 * s && std::abs(alpha - 0.5) <= 1e-12 * s && std::abs(scheme.alpha - 0.5) <= 1e-12 * s &&
               worst <= 1e-3 * s;
  res.detail = "noise_residual=" + num(noise) + " alpha=" + num(alpha) + " max_qfi_relative_error=" + num(worst);
  res.table = t.str();
  return res;
}

CriterionResult revival(const ReproduceOptions& o) {
  constexpr double kOffset = 0.3, kGap = 0.7, kCBar = 1.3;
  const NoiseDistribution spectrum = NoiseDistribution::equally_gapped(kOffset, kGap, {0.1, 0.2, 0.4, 0.2, 0.1});
  const NoiseDistribution dist = spectrum.scaled(kCBar);
  const double t_rev = revival_time(kGap, kCBar);
  CsvTable t({"N", "t_revival", "coherence_at_revival", "coherence_at_half"});
  double worst = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const double g = std::abs(ghz_coherence({n, dist, t_rev, 0.0}));
    const double half = std::abs(ghz_coherence({n, dist, 0.5 * t_rev / static_cast<double>(n), 0.0}));
    worst = std::max(worst, std::abs(g - 1.0));
    t.row({num(n), num(t_rev), num(g), num(half)});
  }
  const bool fisher_unbounded = classical_fisher(dist).unbounded;
  CriterionResult res;
  res.passed = worst <= 1e-10 * o.tolerance_scale && fisher_unbounded;
  res.detail = "max_coherence_error=" + num(worst) +
               (fisher_unbounded ? " classical_fisher=unbounded" : " classical_fisher=finite");
  res.table = t.str();
  return res;
}

CriterionResult fidelity_qfi(const ReproduceOptions& o) {
  constexpr std::size_t kPoints = 50;
  struct Row {
    std::size_t n;
    double sigma, t, fid, closed;
  };
  std::vector<Row> rows(kPoints);
  parallel_for(kPoints, o.threads, [&](std::size_t i) {
    CounterRng rng = case_rng(o.seed, 12, i);
    const std::size_t n = 1 + i % 4;
    const double sigma = uniform(rng, 0.2, 2.0);
    const double x = uniform(rng, 0.2, 1.5);
    const double time = x / (static_cast<double>(n) * sigma);
    const NoiseDistribution p = NoiseDistribution::gaussian(0.0, sigma);
    const DenseOperator rho0 = ghz_state(n);
    const StateFamily fam = [&](double omega) { return channel_output({n, p, time, omega}, rho0); };
    rows[i] = {n, sigma, time, qfi_from_fidelity(fam, 0.37), qfi_ghz_gaussian(n, sigma, time).qfi};
  });
  CsvTable t({"case", "N", "sigma", "t", "qfi_fidelity", "qfi_closed_form", "relative_error"});
  double worst = 0.0;
  for (std::size_t i = 0; i < kPoints; ++i) {
    const Row& r = rows[i];
    const double rel = std::abs(r.fid - r.closed) / r.closed;
    worst = std::max(worst, rel);
    t.row({num(i), num(r.n), num(r.sigma), num(r.t), num(r.fid), num(r.closed), num(rel)});
  }
  CriterionResult res;
  res.passed = worst <= 0.005 * o.tolerance_scale;
  res.detail = "points=50 max_relative_error=" + num(worst);
  res.table = t.str();
  return res;
}

std::string table_name(int id) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "criterion_%02d_%s.csv", id, kSlugs[id - 1]);
  return buf;
}

std::vector<CriterionResult> run_numeric(const ReproduceOptions& o) {
  std::vector<CriterionResult> out;
  for (int id = 1; id < kCriteriaCount; ++id) out.push_back(run_criterion(id, o));
  return out;
}

}  // namespace

CriterionResult run_criterion(int id, const ReproduceOptions& opts) {
  require(id >= 1 && id < kCriteriaCount, ErrorCode::invalid_argument,
          "criterion id must be between 1 and " + std::to_string(kCriteriaCount - 1));
  require(opts.tolerance_scale >= 0.0 && std::isfinite(opts.tolerance_scale), ErrorCode::invalid_argument,
          "tolerance scale must be finite and non-negative");
  using Fn = CriterionResult (*)(const ReproduceOptions&);
  static constexpr Fn kFns[] = {standard_form_roundtrip, exact_decoupling, trotter_convergence_check,
                                transverse_invariance,   gaussian_constant, bound_check,
                                local_scaling,           variance_reduction, antisymmetric,
                                correlated_chain,        revival,           fidelity_qfi};
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = kFns[id - 1](opts);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.id = id;
  r.name = kNames[id - 1];
  if (r.time_limit > 0.0 && r.seconds >= r.time_limit) {
    r.passed = false;
    r.detail += " runtime_exceeded";
  }
  return r;
}

ReproduceReport reproduce_paper(const ReproduceOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<CriterionResult> first = run_numeric(opts);
  const std::vector<CriterionResult> second = run_numeric(opts);

  bool identical = true;
  std::size_t differing = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i].table != second[i].table || first[i].detail != second[i].detail) {
      identical = false;
      ++differing;
    }
  }
  CriterionResult det;
  det.id = kCriteriaCount;
  det.name = kNames[kCriteriaCount - 1];
  det.passed = identical;
  det.detail = "reruns=2 differing_tables=" + std::to_string(differing);
  det.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  first.push_back(det);

  ReproduceReport rep;
  rep.criteria = std::move(first);
  rep.all_passed = std::all_of(rep.criteria.begin(), rep.criteria.end(), [](const auto& c) { return c.passed; });

  CsvTable summary({"criterion", "name", "status", "detail"});
  for (const auto& c : rep.criteria) {
    if (!c.table.empty()) rep.files.push_back({table_name(c.id), c.table});
    summary.row({std::to_string(c.id), c.name, c.passed ? "PASS" : "FAIL", c.detail});
  }
  rep.files.push_back({"summary.csv", summary.str()});

  nlohmann::json config = {{"command", "reproduce-paper"}, {"seed", opts.seed},
                           {"tolerance_scale", json_number(opts.tolerance_scale)}};
  nlohmann::json extra = {{"all_passed", rep.all_passed}, {"tolerance_scale", json_number(opts.tolerance_scale)}};
  rep.files.push_back({"manifest.json", build_manifest(rep.files, sha256_hex(config.dump()), opts.seed, extra)});
  return rep;
}

std::string summary_text(const ReproduceReport& report) {
  std::string out;
  for (const auto& c : report.criteria) {
    out += c.passed ? "PASS " : "FAIL ";
    out += std::to_string(c.id) + " " + c.name + ": " + c.detail + "\n";
  }
  return out;
}

}  // namespace ddm
