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

#include "ddm/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ddm/fit.hpp"
#include "ddm/parallel.hpp"

namespace ddm {

const char* to_string(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::discrete: return "discrete";
    case NoiseKind::mixture: return "mixture";
    case NoiseKind::tabulated: return "tabulated";
  }
  return "unknown";
}

namespace {

constexpr double kWeightCutoff = 1e-14;
constexpr double kNormTol = 1e-10;

double gaussian_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

NoiseKind classify(const std::vector<NoiseDistribution::Component>& comps) {
  const bool all_points = std::all_of(comps.begin(), comps.end(), [](const auto& c) { return c.sigma == 0.0; });
  if (all_points) return NoiseKind::discrete;
  if (comps.size() == 1) return NoiseKind::gaussian;
  return NoiseKind::mixture;
}

// sum_i int_{x_i}^{x_{i+1}} f(x) p(x) dx for a piecewise-linear density.
template <class F>
double integrate_tabulated(const std::vector<double>& grid, const std::vector<double>& vals, F&& f) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double x0 = grid[i], x1 = grid[i + 1], p0 = vals[i], p1 = vals[i + 1];
    if (p0 == 0.0 && p1 == 0.0) continue;
    auto g = [&](double x) { return f(x) * (p0 + (p1 - p0) * (x - x0) / (x1 - x0)); };
    total += gauss_kronrod<double, 15>::integrate(g, x0, x1, 5, 1e-10);
  }
  return total;
}

}  // namespace

NoiseDistribution NoiseDistribution::gaussian(double mean, double sigma) {
  require(std::isfinite(mean) && std::isfinite(sigma) && sigma >= 0.0, ErrorCode::invalid_argument,
          "gaussian noise needs a finite mean and sigma >= 0");
  NoiseDistribution d;
  d.components_ = {{1.0, mean, sigma}};
  d.kind_ = classify(d.components_);
  return d;
}

NoiseDistribution NoiseDistribution::discrete(std::vector<double> points, std::vector<double> weights) {
  require(points.size() == weights.size() && !points.empty(), ErrorCode::invalid_argument,
          "discrete noise needs matching, non-empty points and weights");
  std::vector<Component> comps;
  for (std::size_t i = 0; i < points.size(); ++i) comps.push_back({weights[i], points[i], 0.0});
  return mixture(std::move(comps));
}

NoiseDistribution NoiseDistribution::mixture(std::vector<Component> components) {
  require(!components.empty(), ErrorCode::invalid_argument, "a mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    require(c.weight >= 0.0 && std::isfinite(c.weight), ErrorCode::invalid_argument, "weights must be non-negative");
    require(std::isfinite(c.mean) && std::isfinite(c.sigma) && c.sigma >= 0.0, ErrorCode::invalid_argument,
            "components need a finite mean and sigma >= 0");
    total += c.weight;
  }
  require(std::abs(total - 1.0) <= kNormTol, ErrorCode::unnormalized, "noise weights must sum to 1");
  std::erase_if(components, [](const Component& c) { return c.weight < kWeightCutoff; });
  NoiseDistribution d;
  d.components_ = std::move(components);
  d.kind_ = classify(d.components_);
  return d;
}

NoiseDistribution NoiseDistribution::tabulated(std::vector<double> grid, std::vector<double> density) {
  require(grid.size() == density.size() && grid.size() >= 2, ErrorCode::invalid_argument,
          "tabulated noise needs at least two matching grid points");
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::isfinite(grid[i]) && std::isfinite(density[i]) && density[i] >= 0.0, ErrorCode::invalid_argument,
            "tabulated density must be finite and non-negative");
    if (i > 0) {
      require(grid[i] > grid[i - 1], ErrorCode::invalid_argument, "tabulated grid must be strictly increasing");
      total += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    }
  }
  require(std::abs(total - 1.0) <= 1e-8, ErrorCode::unnormalized, "tabulated density must integrate to 1");
  NoiseDistribution d;
  d.kind_ = NoiseKind::tabulated;
  d.grid_ = std::move(grid);
  d.values_ = std::move(density);
  return d;
}

NoiseDistribution NoiseDistribution::equally_gapped(double offset, double gap, std::vector<double> weights) {
  require(gap > 0.0, ErrorCode::invalid_argument, "spectral gap must be positive");
  std::vector<double> points;
  for (std::size_t k = 0; k < weights.size(); ++k) points.push_back(offset + static_cast<double>(k) * gap);
  return discrete(std::move(points), std::move(weights));
}

bool NoiseDistribution::is_discrete() const noexcept { return kind_ == NoiseKind::discrete; }

double NoiseDistribution::mean() const {
  if (kind_ == NoiseKind::tabulated) return integrate_tabulated(grid_, values_, [](double x) { return x; });
  double m = 0.0;
  for (const auto& c : components_) m += c.weight * c.mean;
  return m;
}

double NoiseDistribution::variance() const {
  const double mu = mean();
  if (kind_ == NoiseKind::tabulated) {
    return integrate_tabulated(grid_, values_, [mu](double x) { return (x - mu) * (x - mu); });
  }
  double v = 0.0;
  for (const auto& c : components_) v += c.weight * (c.sigma * c.sigma + (c.mean - mu) * (c.mean - mu));
  return v;
}

double NoiseDistribution::density(double x) const {
  if (kind_ == NoiseKind::tabulated) {
    if (x < grid_.front() || x > grid_.back()) return 0.0;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.end()) return values_.back();
    const auto i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    const double w = (x - grid_[i]) / (grid_[i + 1] - grid_[i]);
    return values_[i] + w * (values_[i + 1] - values_[i]);
  }
  double p = 0.0;
  for (const auto& c : components_) {
    require(c.sigma > 0.0, ErrorCode::invalid_argument, "a distribution with point masses has no density");
    p += c.weight * gaussian_pdf(x, c.mean, c.sigma);
  }
  return p;
}

Complex NoiseDistribution::characteristic(double s) const {
  if (kind_ == NoiseKind::tabulated) {
    const double re = integrate_tabulated(grid_, values_, [s](double x) { return std::cos(x * s); });
    const double im = integrate_tabulated(grid_, values_, [s](double x) { return -std::sin(x * s); });
    return {re, im};
  }
  Complex acc(0.0, 0.0);
  for (const auto& c : components_) {
    acc += c.weight * std::exp(Complex(-0.5 * c.sigma * c.sigma * s * s, -c.mean * s));
  }
  return acc;
}

NoiseDistribution NoiseDistribution::scaled(double factor) const {
  require(std::isfinite(factor) && factor != 0.0, ErrorCode::invalid_argument, "scale factor must be finite and nonzero");
  NoiseDistribution d = *this;
  if (kind_ == NoiseKind::tabulated) {
    const double a = std::abs(factor);
    for (auto& x : d.grid_) x *= factor;
    for (auto& v : d.values_) v /= a;
    if (factor < 0.0) {
      std::reverse(d.grid_.begin(), d.grid_.end());
      std::reverse(d.values_.begin(), d.values_.end());
    }
    return d;
  }
  for (auto& c : d.components_) {
    c.mean *= factor;
    c.sigma *= std::abs(factor);
  }
  return d;
}

NoiseDistribution convolve(const NoiseDistribution& a, const NoiseDistribution& b) {
  using Comp = NoiseDistribution::Component;
  if (a.kind() != NoiseKind::tabulated && b.kind() != NoiseKind::tabulated) {
    std::vector<Comp> out;
    for (const auto& x : a.components()) {
      for (const auto& y : b.components()) {
        const Comp c{x.weight * y.weight, x.mean + y.mean, std::hypot(x.sigma, y.sigma)};
        auto same = std::find_if(out.begin(), out.end(), [&](const Comp& o) {
          return std::abs(o.mean - c.mean) <= 1e-15 * std::max(1.0, std::abs(c.mean)) && o.sigma == c.sigma;
        });
        if (same != out.end()) {
          same->weight += c.weight;
        } else {
          out.push_back(c);
        }
      }
    }
    double total = 0.0;
    for (const auto& c : out) total += c.weight;
    for (auto& c : out) c.weight /= total;
    return NoiseDistribution::mixture(std::move(out));
  }

  // Numerical path: integrate the tabulated factor against the other.
  const NoiseDistribution& tab = a.kind() == NoiseKind::tabulated ? a : b;
  const NoiseDistribution& other = a.kind() == NoiseKind::tabulated ? b : a;
  auto support = [](const NoiseDistribution& d) {
    if (d.kind() == NoiseKind::tabulated) return std::pair{d.grid().front(), d.grid().back()};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& c : d.components()) {
      lo = std::min(lo, c.mean - 12.0 * c.sigma);
      hi = std::max(hi, c.mean + 12.0 * c.sigma);
    }
    return std::pair{lo, hi};
  };
  const auto [la, ha] = support(tab);
  const auto [lb, hb] = support(other);
  constexpr std::size_t kPoints = 4097;
  const double lo = la + lb, hi = ha + hb;
  std::vector<double> grid(kPoints), vals(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kPoints - 1);
    grid[i] = x;
    double p = 0.0;
    if (other.kind() == NoiseKind::tabulated) {
      p = integrate_tabulated(tab.grid(), tab.values(), [&](double y) { return other.density(x - y); });
    } else {
      for (const auto& c : other.components()) {
        if (c.sigma == 0.0) {
          p += c.weight * tab.density(x - c.mean);
        } else {
          p += c.weight * integrate_tabulated(tab.grid(), tab.values(),
                                              [&](double y) { return gaussian_pdf(x - y, c.mean, c.sigma); });
        }
      }
    }
    vals[i] = std::max(0.0, p);
  }
  double total = 0.0;
  for (std::size_t i = 1; i < kPoints; ++i) total += 0.5 * (vals[i] + vals[i - 1]) * (grid[i] - grid[i - 1]);
  require(total > 0.0, ErrorCode::invalid_argument, "convolution produced an empty density");
  for (auto& v : vals) v /= total;
  return NoiseDistribution::tabulated(std::move(grid), std::move(vals));
}

// ---------------------------------------------------------------------------
// Pulsed evolution

namespace {

// Shares one eigendecomposition of H across every cycle count.
class CycleEvolver {
 public:
  CycleEvolver(const SEHamiltonian& h, const PulseSchedule& cycle) : cycle_(cycle) {
    require(cycle.num_qubits() == h.sites(), ErrorCode::dimension_mismatch,
            "schedule and Hamiltonian have different qubit counts");
    const DenseOperator hm = h.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(hm.matrix());
    vecs_ = es.eigenvectors();
    vals_ = es.eigenvalues();
    env_dim_ = static_cast<Eigen::Index>(h.environment_space().dim());
    for (const auto& g : cycle.gates()) gates_.push_back(lift(g.matrix()));
  }

  Matrix lift(const Matrix& sys) const {
    const Eigen::Index ds = sys.rows(), de = env_dim_;
    Matrix out = Matrix::Zero(ds * de, ds * de);
    for (Eigen::Index i = 0; i < ds; ++i) {
      for (Eigen::Index j = 0; j < ds; ++j) {
        if (sys(i, j) != Complex(0.0)) out.block(i * de, j * de, de, de).diagonal().setConstant(sys(i, j));
      }
    }
    return out;
  }

  Matrix step(double dt) const {
    Vector phases(vals_.size());
    for (Eigen::Index k = 0; k < vals_.size(); ++k) phases(k) = std::exp(Complex(0.0, -vals_(k) * dt));
    return vecs_ * phases.asDiagonal() * vecs_.adjoint();
  }

  Matrix evolve_cycles(std::size_t m, double total_time) const {
    const Eigen::Index d = vecs_.rows();
    if (total_time == 0.0) {
      // Zero-length intervals: only the pulses act.
      Matrix c = Matrix::Identity(d, d);
      for (const auto& g : gates_) c = g * c;
      return power(c, m);
    }
    const PulseSchedule s = cycle_.rescaled(total_time / static_cast<double>(m));
    Matrix c = Matrix::Identity(d, d);
    for (std::size_t i = 0; i < s.intervals(); ++i) c = step(s.times()[i + 1] - s.times()[i]) * (gates_[i] * c);
    return power(c, m);
  }

  static Matrix power(Matrix base, std::size_t m) {
    Matrix result = Matrix::Identity(base.rows(), base.cols());
    while (m > 0) {
      if (m & 1U) result = base * result;
      m >>= 1U;
      if (m > 0) base = base * base;
    }
    return result;
  }

 private:
  PulseSchedule cycle_;
  Matrix vecs_;
  Eigen::VectorXd vals_;
  Eigen::Index env_dim_ = 1;
  std::vector<Matrix> gates_;
};

void check_evolution(const PulsedEvolution& pe) {
  require(pe.cycles >= 1, ErrorCode::invalid_argument, "cycle count must be positive");
  require(pe.total_time >= 0.0 && std::isfinite(pe.total_time), ErrorCode::invalid_argument,
          "total time must be finite and non-negative");
}

double phase_aligned_distance(const Matrix& a, const Matrix& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return operator_norm(a - phase * b);
}

double trotter_error_with(const CycleEvolver& ev, const PulsedEvolution& pe, const Matrix& heff_prop) {
  const Matrix exact = ev.evolve_cycles(pe.cycles, pe.total_time);
  const Matrix v = CycleEvolver::power(pe.schedule.residual().matrix(), pe.cycles);
  return phase_aligned_distance(exact, ev.lift(v) * heff_prop);
}

}  // namespace

DenseOperator exact_pulsed_unitary(const PulsedEvolution& pe) {
  check_evolution(pe);
  const CycleEvolver ev(pe.hamiltonian, pe.schedule);
  return {pe.hamiltonian.space(), ev.evolve_cycles(pe.cycles, pe.total_time)};
}

double trotter_error(const PulsedEvolution& pe, const SEHamiltonian& h_eff) {
  check_evolution(pe);
  require(h_eff.space() == pe.hamiltonian.space(), ErrorCode::dimension_mismatch,
          "effective Hamiltonian lives on a different space");
  const CycleEvolver ev(pe.hamiltonian, pe.schedule);
  return trotter_error_with(ev, pe, evolve(h_eff.matrix(), pe.total_time).matrix());
}

ConvergenceReport trotter_convergence(const SEHamiltonian& h, const PulseSchedule& cycle, double total_time,
                                      const std::vector<std::size_t>& cycle_grid, std::size_t threads) {
  require(!cycle_grid.empty(), ErrorCode::invalid_argument, "cycle grid must not be empty");
  const SEHamiltonian h_eff = apply_map(schedule_to_map(cycle), h);
  const CycleEvolver ev(h, cycle);
  const Matrix heff_prop = evolve(h_eff.matrix(), total_time).matrix();
  ConvergenceReport rep;
  rep.points.resize(cycle_grid.size());
  parallel_for(cycle_grid.size(), threads, [&](std::size_t i) {
    const PulsedEvolution pe{h, cycle, cycle_grid[i], total_time};
    check_evolution(pe);
    rep.points[i] = {cycle_grid[i], trotter_error_with(ev, pe, heff_prop)};
  });
  std::vector<double> ms, errs;
  for (const auto& p : rep.points) {
    if (p.error > 1e-13) {
      ms.push_back(static_cast<double>(p.cycles));
      errs.push_back(p.error);
    }
  }
  if (ms.size() >= 2) rep.fitted_order = fit_loglog(ms, errs).slope;
  return rep;
}

// ---------------------------------------------------------------------------
// Parallel-noise channel

Complex ghz_coherence(const ParallelNoiseChannel& ch) {
  require(ch.n >= 1, ErrorCode::invalid_argument, "channel needs at least one qubit");
  return ch.distribution.characteristic(static_cast<double>(ch.n) * ch.time);
}

DenseOperator channel_output(const ParallelNoiseChannel& ch, const DenseOperator& rho) {
  require(ch.n >= 1 && ch.n < 63, ErrorCode::invalid_argument, "channel qubit count out of range");
  require(rho.space() == HilbertSpace::qubits(ch.n), ErrorCode::dimension_mismatch,
          "channel input must be an operator on the channel's qubits");
  require(rho.is_hermitian(1e-10), ErrorCode::not_density_matrix, "channel input is not Hermitian");
  // S3/2 eigenvalue difference between basis states x and y is popcount(y) - popcount(x).
  const auto n = static_cast<long>(ch.n);
  std::vector<Complex> factor(static_cast<std::size_t>(2 * n + 1));
  for (long k = -n; k <= n; ++k) {
    const double s = static_cast<double>(k) * ch.time;
    factor[static_cast<std::size_t>(k + n)] =
        std::exp(Complex(0.0, -ch.omega * s)) * ch.distribution.characteristic(s);
  }
  Matrix out = rho.matrix();
  const auto dim = static_cast<std::size_t>(out.rows());
  for (std::size_t x = 0; x < dim; ++x) {
    const long px = std::popcount(x);
    for (std::size_t y = 0; y < dim; ++y) {
      const long k = static_cast<long>(std::popcount(y)) - px;
      out(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) *= factor[static_cast<std::size_t>(k + n)];
    }
  }
  return {rho.space(), std::move(out)};
}

Eigen::Matrix2cd ghz_channel_output(const ParallelNoiseChannel& ch, const Eigen::Matrix2cd& rho) {
  const double s = static_cast<double>(ch.n) * ch.time;
  const Complex f = std::exp(Complex(0.0, -ch.omega * s)) * ghz_coherence(ch);
  Eigen::Matrix2cd out = rho;
  out(0, 1) *= f;
  out(1, 0) *= std::conj(f);
  return out;
}

DenseOperator ghz_state(std::size_t n) {
  const HilbertSpace space = HilbertSpace::qubits(n);
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(space.dim()));
  psi(0) = 1.0;
  psi(psi.size() - 1) = 1.0;
  return projector(space, psi);
}

Eigen::Matrix2cd ghz_state_2d() { return Eigen::Matrix2cd::Constant(Complex(0.5, 0.0)); }

double revival_time(double gap, double c_bar) {
  require(gap > 0.0 && c_bar != 0.0 && std::isfinite(c_bar), ErrorCode::invalid_argument,
          "revival needs a positive gap and a nonzero coupling");
  return 2.0 * std::numbers::pi / (gap * std::abs(c_bar));
}

}  // namespace ddm
