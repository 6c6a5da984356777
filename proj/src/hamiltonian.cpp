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

#include "ddm/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ddm {

const char* to_string(EnvModel model) noexcept {
  return model == EnvModel::independent ? "independent" : "common";
}

namespace {

std::vector<SignalTerm> default_signal(std::size_t sites) {
  std::vector<SignalTerm> s;
  for (std::size_t a = 0; a < sites; ++a) s.push_back({1.0, PauliString::single(sites, a, 3)});
  return s;
}

DenseOperator with_env(const PauliString& p, const DenseOperator& env, const HilbertSpace& full) {
  const Matrix sys = p.matrix();
  const Matrix& e = env.matrix();
  Matrix out(sys.rows() * e.rows(), sys.cols() * e.cols());
  out.setZero();
  for (Eigen::Index i = 0; i < sys.rows(); ++i) {
    for (Eigen::Index j = 0; j < sys.cols(); ++j) {
      if (sys(i, j) == Complex(0.0)) continue;
      out.block(i * e.rows(), j * e.cols(), e.rows(), e.cols()) = sys(i, j) * e;
    }
  }
  return {full, std::move(out)};
}

// Schmidt coefficients at or below this fraction of max(1, b1) are exact zeros.
constexpr double kZeroSchmidt = 1e-10;

}  // namespace

SEHamiltonian::SEHamiltonian(double omega, std::size_t sites, EnvModel model, std::vector<std::size_t> env_dims)
    : omega_(omega), sites_(sites), model_(model), env_dims_(std::move(env_dims)) {
  require(sites >= 1, ErrorCode::invalid_argument, "a Hamiltonian needs at least one system site");
  require(std::isfinite(omega), ErrorCode::invalid_argument, "omega must be finite");
  if (model_ == EnvModel::independent) {
    require(env_dims_.size() == sites_, ErrorCode::invalid_argument,
            "independent environments need one dimension per site");
  } else {
    require(env_dims_.size() == 1, ErrorCode::invalid_argument, "a common environment has exactly one factor");
  }
  space_ = HilbertSpace::composite(sites_, env_dims_);
  system_space_ = space_.system_part();
  env_space_ = space_.environment_part();
  signal_ = default_signal(sites_);
}

void SEHamiltonian::set_signal(std::vector<SignalTerm> signal) {
  for (const auto& s : signal) {
    require(s.paulis.size() == sites_, ErrorCode::dimension_mismatch, "signal Pauli string has the wrong length");
  }
  signal_ = std::move(signal);
}

void SEHamiltonian::add_term(double coupling, PauliString paulis, DenseOperator env_op) {
  require(paulis.size() == sites_, ErrorCode::dimension_mismatch,
          "Pauli string '" + paulis.str() + "' does not have " + std::to_string(sites_) + " sites");
  require(env_op.space() == env_space_, ErrorCode::dimension_mismatch,
          "environment operator does not act on the environment space");
  require(env_op.is_hermitian(), ErrorCode::not_hermitian, "environment operator is not Hermitian");
  require(std::isfinite(coupling), ErrorCode::invalid_argument, "coupling must be finite");
  terms_.push_back({coupling, std::move(paulis), std::move(env_op)});
}

void SEHamiltonian::set_trivial(double coupling, DenseOperator env_op) {
  require(env_op.space() == env_space_, ErrorCode::dimension_mismatch,
          "trivial-term operator does not act on the environment space");
  require(env_op.is_hermitian(), ErrorCode::not_hermitian, "trivial-term operator is not Hermitian");
  trivial_ = TrivialTerm{coupling, std::move(env_op)};
}

DenseOperator SEHamiltonian::env_factor_op(const DenseOperator& op, std::size_t factor) const {
  require(factor < env_space_.num_factors(), ErrorCode::invalid_argument, "environment factor out of range");
  return embed(DenseOperator(HilbertSpace::environment({op.dim()}), op.matrix()), factor, env_space_);
}

DenseOperator SEHamiltonian::signal_system_matrix() const {
  DenseOperator out = DenseOperator::zero(system_space_);
  for (const auto& s : signal_) out += DenseOperator(system_space_, (omega_ * s.weight) * s.paulis.matrix());
  return out;
}

DenseOperator SEHamiltonian::signal_matrix() const {
  return kron(signal_system_matrix(), DenseOperator::identity(env_space_));
}

DenseOperator SEHamiltonian::noise_matrix() const {
  DenseOperator out = DenseOperator::zero(space_);
  for (const auto& t : terms_) out += t.coupling * with_env(t.paulis, t.env_op, space_);
  return out;
}

DenseOperator SEHamiltonian::site_noise_matrix(std::size_t site) const {
  require(site < sites_, ErrorCode::invalid_argument, "site out of range");
  DenseOperator out = DenseOperator::zero(space_);
  for (const auto& t : terms_) {
    const auto sup = t.paulis.support();
    if (sup.size() == 1 && sup[0] == site) out += t.coupling * with_env(t.paulis, t.env_op, space_);
  }
  return out;
}

DenseOperator SEHamiltonian::matrix() const {
  DenseOperator out = signal_matrix() + noise_matrix();
  if (trivial_) {
    out += trivial_->coupling * kron(DenseOperator::identity(system_space_), trivial_->env_op);
  }
  return out;
}

std::array<DenseOperator, 3> SEHamiltonian::site_couplings(std::size_t site) const {
  require(site < sites_, ErrorCode::invalid_argument, "site out of range");
  std::array<DenseOperator, 3> c{DenseOperator::zero(env_space_), DenseOperator::zero(env_space_),
                                 DenseOperator::zero(env_space_)};
  for (const auto& t : terms_) {
    const auto sup = t.paulis.support();
    if (sup.size() != 1 || sup[0] != site) continue;
    c[static_cast<std::size_t>(t.paulis.index(site) - 1)] += t.coupling * t.env_op;
  }
  return c;
}

// ---------------------------------------------------------------------------

SEHamiltonian single_qubit(double omega, const std::array<double, 4>& c, const std::array<DenseOperator, 4>& A) {
  return n_qubit_independent(omega, {SiteCoupling{c, A}});
}

namespace {

SEHamiltonian assemble(double omega, const std::vector<SiteCoupling>& per_site, EnvModel model) {
  require(!per_site.empty(), ErrorCode::invalid_argument, "at least one site is required");
  const std::size_t n = per_site.size();
  std::vector<std::size_t> dims;
  for (const auto& s : per_site) {
    const std::size_t d = s.A[0].dim();
    for (const auto& a : s.A) {
      require(a.dim() == d, ErrorCode::dimension_mismatch, "all A_j of one site must share a dimension");
      require(a.is_hermitian(), ErrorCode::not_hermitian, "environment operator A_j is not Hermitian");
    }
    dims.push_back(d);
  }
  if (model == EnvModel::common) {
    for (auto d : dims) {
      require(d == dims[0], ErrorCode::dimension_mismatch, "a common environment needs equal operator dimensions");
    }
    dims = {dims[0]};
  }
  SEHamiltonian h(omega, n, model, dims);
  DenseOperator trivial = DenseOperator::zero(h.environment_space());
  bool has_trivial = false;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t factor = model == EnvModel::independent ? a : 0;
    const auto& s = per_site[a];
    if (s.c[0] != 0.0) {
      trivial += s.c[0] * h.env_factor_op(s.A[0], factor);
      has_trivial = true;
    }
    for (int j = 1; j <= 3; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (s.c[ju] == 0.0) continue;
      h.add_term(s.c[ju], PauliString::single(n, a, j), h.env_factor_op(s.A[ju], factor));
    }
  }
  if (has_trivial) h.set_trivial(1.0, std::move(trivial));
  return h;
}

}  // namespace

SEHamiltonian n_qubit_independent(double omega, const std::vector<SiteCoupling>& per_site) {
  return assemble(omega, per_site, EnvModel::independent);
}

SEHamiltonian n_qubit_common(double omega, const std::vector<SiteCoupling>& per_site) {
  return assemble(omega, per_site, EnvModel::common);
}

SEHamiltonian permute_sites(const SEHamiltonian& h, const std::vector<std::size_t>& perm) {
  const std::size_t n = h.sites();
  require(perm.size() == n, ErrorCode::invalid_argument, "permutation has the wrong length");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    require(p < n && !seen[p], ErrorCode::invalid_argument, "not a permutation");
    seen[p] = true;
  }
  auto relabel = [&](const PauliString& s) {
    std::string out(n, 'I');
    for (std::size_t a = 0; a < n; ++a) out[perm[a]] = s[a];
    return PauliString(std::move(out));
  };
  SEHamiltonian out(h.omega(), n, h.env_model(), h.env_dims());
  std::vector<SignalTerm> sig;
  for (const auto& s : h.signal()) sig.push_back({s.weight, relabel(s.paulis)});
  out.set_signal(std::move(sig));
  for (const auto& t : h.terms()) out.add_term(t.coupling, relabel(t.paulis), t.env_op);
  if (h.trivial()) out.set_trivial(h.trivial()->coupling, h.trivial()->env_op);
  return out;
}

// ---------------------------------------------------------------------------
// Standard form

DenseOperator StandardForm::reconstruct(const SEHamiltonian& like, std::size_t site) const {
  const HilbertSpace qubits = HilbertSpace::qubits(like.sites());
  DenseOperator out = DenseOperator::zero(like.space());
  for (std::size_t j = 0; j < 3; ++j) {
    if (b[j] == 0.0) continue;
    out += b[j] * kron(embed(sigma_n(frame[j]), site, qubits), B[j]);
  }
  return out;
}

StandardForm standard_form(const SEHamiltonian& h, std::size_t site) {
  const auto c = h.site_couplings(site);
  StandardForm sf;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      sf.overlap(i, k) = (c[static_cast<std::size_t>(i)].matrix() * c[static_cast<std::size_t>(k)].matrix()).trace().real();
    }
  }
  sf.overlap = 0.5 * (sf.overlap + sf.overlap.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sf.overlap);
  // Eigen returns ascending eigenvalues.
  std::array<double, 3> lam{es.eigenvalues()(2), es.eigenvalues()(1), es.eigenvalues()(0)};
  std::array<Eigen::Vector3d, 3> vec{es.eigenvectors().col(2), es.eigenvectors().col(1), es.eigenvectors().col(0)};

  // Sign: largest-magnitude component positive.
  for (auto& v : vec) {
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
  }
  // Degenerate eigenvalues: order the cluster lexicographically, largest first.
  const double lam_scale = std::max(1.0, std::abs(lam[0]));
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(lam[a] - lam[b]) > 1e-12 * lam_scale) return lam[a] > lam[b];
    return std::lexicographical_compare(vec[b].data(), vec[b].data() + 3, vec[a].data(), vec[a].data() + 3);
  });
  Eigen::Matrix3d r;
  for (std::size_t j = 0; j < 3; ++j) {
    r.col(static_cast<Eigen::Index>(j)) = vec[order[j]];
    sf.lambda[j] = lam[order[j]];
  }
  if (r.determinant() < 0.0) r.col(2) = -r.col(2);

  const HilbertSpace& env = h.environment_space();
  std::array<DenseOperator, 3> cj{DenseOperator::zero(env), DenseOperator::zero(env), DenseOperator::zero(env)};
  std::array<double, 3> norms{};
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      cj[j] += r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * c[i];
    }
    norms[j] = hs_norm(cj[j]);
  }
  const double top = std::max(1.0, *std::max_element(norms.begin(), norms.end()));
  for (std::size_t j = 0; j < 3; ++j) {
    if (norms[j] <= kZeroSchmidt * top) {
      sf.b[j] = 0.0;
      sf.B[j] = DenseOperator::zero(env);
    } else {
      sf.b[j] = norms[j];
      sf.B[j] = cj[j] * Complex(1.0 / norms[j]);
    }
  }
  // Rounding can reorder nearly equal norms; keep b descending. Swapping two
  // columns and negating one keeps det R = +1.
  for (std::size_t pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j + 1 < 3; ++j) {
      if (sf.b[j] < sf.b[j + 1]) {
        std::swap(sf.b[j], sf.b[j + 1]);
        std::swap(sf.B[j], sf.B[j + 1]);
        std::swap(sf.lambda[j], sf.lambda[j + 1]);
        const Eigen::Vector3d tmp = r.col(static_cast<Eigen::Index>(j));
        r.col(static_cast<Eigen::Index>(j)) = r.col(static_cast<Eigen::Index>(j + 1));
        r.col(static_cast<Eigen::Index>(j + 1)) = -tmp;
        sf.B[j + 1] *= -1.0;
      }
    }
  }
  sf.rotation = r;
  for (std::size_t j = 0; j < 3; ++j) {
    sf.frame[j] = UnitVector3::normalized(r.col(static_cast<Eigen::Index>(j)));
  }
  sf.degenerate = sf.b[0] == 0.0;
  return sf;
}

NoiseRank noise_rank(const StandardForm& sf, double tol) {
  const int rank = static_cast<int>(std::count_if(sf.b.begin(), sf.b.end(), [&](double b) { return b > tol; }));
  return {rank, tol};
}

}  // namespace ddm
