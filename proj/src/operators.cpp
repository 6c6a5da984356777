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

#include "ddm/operators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace ddm {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::dimension_cap: return "dimension cap exceeded";
    case ErrorCode::not_hermitian: return "operator is not Hermitian";
    case ErrorCode::not_unitary: return "operator is not unitary";
    case ErrorCode::not_density_matrix: return "not a density matrix";
    case ErrorCode::rank_too_high: return "noise rank too high";
    case ErrorCode::unnormalized: return "distribution is not normalized";
    case ErrorCode::unbounded: return "quantity is unbounded";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::io: return "i/o error";
  }
  return "unknown error";
}

namespace {

std::size_t cap_from_env() {
  if (const char* env = std::getenv("DDM_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDimensionCap;
}

std::atomic<std::size_t>& cap_storage() {
  static std::atomic<std::size_t> cap{cap_from_env()};
  return cap;
}

void require_same_space(const DenseOperator& a, const DenseOperator& b, const char* what) {
  if (!(a.space() == b.space())) {
    fail(ErrorCode::dimension_mismatch, std::string(what) + ": operands live on different spaces");
  }
}

}  // namespace

std::size_t dimension_cap() { return cap_storage().load(); }

void set_dimension_cap(std::size_t cap) {
  require(cap >= 1, ErrorCode::invalid_argument, "dimension cap must be positive");
  cap_storage().store(cap);
}

// ---------------------------------------------------------------------------
// HilbertSpace

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  const std::size_t cap = dimension_cap();
  dim_ = 1;
  for (const auto& f : factors_) {
    require(f.dim >= 1, ErrorCode::invalid_argument, "factor dimension must be >= 1");
    if (dim_ > cap / f.dim) {
      fail(ErrorCode::dimension_cap,
           "total dimension exceeds the cap of " + std::to_string(cap));
    }
    dim_ *= f.dim;
  }
  require(dim_ <= cap, ErrorCode::dimension_cap,
          "total dimension " + std::to_string(dim_) + " exceeds the cap of " + std::to_string(cap));
}

HilbertSpace HilbertSpace::qubits(std::size_t n) {
  return HilbertSpace(std::vector<Factor>(n, Factor{FactorKind::system, 2}));
}

HilbertSpace HilbertSpace::environment(std::vector<std::size_t> dims) {
  std::vector<Factor> f;
  f.reserve(dims.size());
  for (auto d : dims) f.push_back({FactorKind::environment, d});
  return HilbertSpace(std::move(f));
}

HilbertSpace HilbertSpace::composite(std::size_t n_qubits, const std::vector<std::size_t>& env_dims) {
  std::vector<Factor> f(n_qubits, Factor{FactorKind::system, 2});
  for (auto d : env_dims) f.push_back({FactorKind::environment, d});
  return HilbertSpace(std::move(f));
}

std::vector<std::size_t> HilbertSpace::dims() const {
  std::vector<std::size_t> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.dim);
  return out;
}

std::size_t HilbertSpace::num_system() const noexcept {
  return static_cast<std::size_t>(std::count_if(factors_.begin(), factors_.end(), [](const Factor& f) {
    return f.kind == FactorKind::system;
  }));
}

std::size_t HilbertSpace::system_dim() const noexcept {
  std::size_t d = 1;
  for (const auto& f : factors_) {
    if (f.kind == FactorKind::system) d *= f.dim;
  }
  return d;
}

std::size_t HilbertSpace::environment_dim() const noexcept {
  std::size_t d = 1;
  for (const auto& f : factors_) {
    if (f.kind == FactorKind::environment) d *= f.dim;
  }
  return d;
}

HilbertSpace HilbertSpace::system_part() const {
  std::vector<Factor> f;
  for (const auto& x : factors_) {
    if (x.kind == FactorKind::system) f.push_back(x);
  }
  return HilbertSpace(std::move(f));
}

HilbertSpace HilbertSpace::environment_part() const {
  std::vector<Factor> f;
  for (const auto& x : factors_) {
    if (x.kind == FactorKind::environment) f.push_back(x);
  }
  return HilbertSpace(std::move(f));
}

HilbertSpace HilbertSpace::subspace(const std::set<std::size_t>& keep) const {
  std::vector<Factor> f;
  for (auto i : keep) {
    require(i < factors_.size(), ErrorCode::invalid_argument, "factor index out of range");
    f.push_back(factors_[i]);
  }
  return HilbertSpace(std::move(f));
}

HilbertSpace HilbertSpace::tensor(const HilbertSpace& other) const {
  std::vector<Factor> f = factors_;
  f.insert(f.end(), other.factors_.begin(), other.factors_.end());
  return HilbertSpace(std::move(f));
}

// ---------------------------------------------------------------------------
// DenseOperator

DenseOperator::DenseOperator(HilbertSpace space, Matrix entries)
    : space_(std::move(space)), m_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(space_.dim());
  if (m_.rows() != d || m_.cols() != d) {
    std::ostringstream os;
    os << "operator of shape " << m_.rows() << "x" << m_.cols() << " does not match space dimension " << d;
    fail(ErrorCode::dimension_mismatch, os.str());
  }
}

DenseOperator DenseOperator::identity(const HilbertSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  return {space, Matrix::Identity(d, d)};
}

DenseOperator DenseOperator::zero(const HilbertSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  return {space, Matrix::Zero(d, d)};
}

double DenseOperator::max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

bool DenseOperator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, max_abs());
}

bool DenseOperator::is_unitary(double tol) const {
  const auto d = static_cast<Eigen::Index>(dim());
  return (m_.adjoint() * m_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& rhs) {
  require_same_space(*this, rhs, "operator+");
  m_ += rhs.m_;
  return *this;
}

DenseOperator& DenseOperator::operator-=(const DenseOperator& rhs) {
  require_same_space(*this, rhs, "operator-");
  m_ -= rhs.m_;
  return *this;
}

DenseOperator& DenseOperator::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  require_same_space(a, b, "operator*");
  return {a.space(), a.matrix() * b.matrix()};
}

double max_distance(const DenseOperator& a, const DenseOperator& b) {
  require_same_space(a, b, "max_distance");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double hs_norm(const DenseOperator& a) { return a.matrix().norm(); }

Complex hs_inner(const DenseOperator& a, const DenseOperator& b) {
  require_same_space(a, b, "hs_inner");
  return (a.matrix().adjoint() * b.matrix()).trace();
}

// ---------------------------------------------------------------------------
// UnitVector3

UnitVector3::UnitVector3(const Eigen::Vector3d& v) : v_(v) {
  if (!(std::abs(v.norm() - 1.0) <= kUnitNormTol)) {
    std::ostringstream os;
    os << "direction (" << v.x() << ", " << v.y() << ", " << v.z() << ") is not normalized";
    fail(ErrorCode::invalid_argument, os.str());
  }
}

UnitVector3 UnitVector3::normalized(const Eigen::Vector3d& v) {
  const double n = v.norm();
  require(n > 1e-300 && std::isfinite(n), ErrorCode::invalid_argument, "cannot normalize a zero vector");
  return UnitVector3(Eigen::Vector3d(v / n));
}

// ---------------------------------------------------------------------------
// Paulis

DenseOperator pauli(int j) {
  const Complex i1(0.0, 1.0);
  Matrix m(2, 2);
  switch (j) {
    case 0: m << 1.0, 0.0, 0.0, 1.0; break;
    case 1: m << 0.0, 1.0, 1.0, 0.0; break;
    case 2: m << 0.0, -i1, i1, 0.0; break;
    case 3: m << 1.0, 0.0, 0.0, -1.0; break;
    default: fail(ErrorCode::invalid_argument, "Pauli index must be in 0..3, got " + std::to_string(j));
  }
  return {HilbertSpace::qubits(1), m};
}

DenseOperator sigma_n(const UnitVector3& n) {
  return n.x() * pauli(1) + n.y() * pauli(2) + n.z() * pauli(3);
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return {a.space().tensor(b.space()), std::move(out)};
}

DenseOperator embed(const DenseOperator& op, std::size_t site, const HilbertSpace& space) {
  require(site < space.num_factors(), ErrorCode::invalid_argument, "embed: site index out of range");
  if (op.dim() != space.factor(site).dim) {
    fail(ErrorCode::dimension_mismatch, "embed: operator dimension " + std::to_string(op.dim()) +
                                            " does not match factor dimension " +
                                            std::to_string(space.factor(site).dim));
  }
  std::size_t left = 1;
  std::size_t right = 1;
  for (std::size_t i = 0; i < site; ++i) left *= space.factor(i).dim;
  for (std::size_t i = site + 1; i < space.num_factors(); ++i) right *= space.factor(i).dim;
  const auto d = static_cast<Eigen::Index>(op.dim());
  const auto r = static_cast<Eigen::Index>(right);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.dim()));
  const Matrix& m = op.matrix();
  for (std::size_t l = 0; l < left; ++l) {
    const auto base = static_cast<Eigen::Index>(l) * d * r;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        if (m(i, j) == Complex(0.0)) continue;
        for (Eigen::Index k = 0; k < r; ++k) out(base + i * r + k, base + j * r + k) = m(i, j);
      }
    }
  }
  return {space, std::move(out)};
}

DenseOperator evolve(const DenseOperator& hamiltonian, double t) {
  require(hamiltonian.is_hermitian(), ErrorCode::not_hermitian, "evolve: Hamiltonian is not Hermitian");
  const Matrix h = 0.5 * (hamiltonian.matrix() + hamiltonian.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd& ev = es.eigenvalues();
  Vector phases(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) phases(k) = std::polar(1.0, -ev(k) * t);
  const Matrix& v = es.eigenvectors();
  return {hamiltonian.space(), v * phases.asDiagonal() * v.adjoint()};
}

Matrix expm_general(const Matrix& m) { return m.exp(); }

DenseOperator partial_trace(const DenseOperator& rho, const std::set<std::size_t>& keep) {
  const HilbertSpace& space = rho.space();
  const std::size_t nf = space.num_factors();
  for (auto k : keep) {
    require(k < nf, ErrorCode::invalid_argument, "partial_trace: factor index " + std::to_string(k) + " out of range");
  }
  const HilbertSpace kept = space.subspace(keep);
  std::vector<std::size_t> dims = space.dims();
  std::vector<std::size_t> strides(nf, 1);
  for (std::size_t i = nf; i-- > 1;) strides[i - 1] = strides[i] * dims[i];

  std::vector<std::size_t> kept_idx(keep.begin(), keep.end());
  std::vector<std::size_t> traced_idx;
  for (std::size_t i = 0; i < nf; ++i) {
    if (!keep.count(i)) traced_idx.push_back(i);
  }
  auto offsets = [&](const std::vector<std::size_t>& which) {
    std::size_t total = 1;
    for (auto i : which) total *= dims[i];
    std::vector<std::size_t> out(total, 0);
    for (std::size_t n = 0; n < total; ++n) {
      std::size_t rem = n;
      std::size_t off = 0;
      for (std::size_t w = which.size(); w-- > 0;) {
        off += (rem % dims[which[w]]) * strides[which[w]];
        rem /= dims[which[w]];
      }
      out[n] = off;
    }
    return out;
  };
  const auto kept_off = offsets(kept_idx);
  const auto traced_off = offsets(traced_idx);

  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (auto t : traced_off) {
        acc += m(static_cast<Eigen::Index>(kept_off[static_cast<std::size_t>(i)] + t),
                 static_cast<Eigen::Index>(kept_off[static_cast<std::size_t>(j)] + t));
      }
      out(i, j) = acc;
    }
  }
  return {kept, std::move(out)};
}

bool is_density_matrix(const DenseOperator& rho, double tol) {
  if (!rho.is_hermitian(tol)) return false;
  if (std::abs(rho.trace() - Complex(1.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho.matrix() + rho.matrix().adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Matrix psd_sqrt(const Matrix& m, double floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  const double top = std::max(ev.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  for (Eigen::Index k = 0; k < ev.size(); ++k) ev(k) = ev(k) > floor * top ? std::sqrt(ev(k)) : 0.0;
  const Matrix& v = es.eigenvectors();
  return v * ev.cast<Complex>().asDiagonal() * v.adjoint();
}

double uhlmann_fidelity(const DenseOperator& rho, const DenseOperator& tau) {
  require_same_space(rho, tau, "uhlmann_fidelity");
  require(is_density_matrix(rho, 1e-8), ErrorCode::not_density_matrix, "uhlmann_fidelity: rho is not a density matrix");
  require(is_density_matrix(tau, 1e-8), ErrorCode::not_density_matrix, "uhlmann_fidelity: tau is not a density matrix");
  const Matrix prod = psd_sqrt(rho.matrix()) * psd_sqrt(tau.matrix());
  Eigen::JacobiSVD<Matrix> svd(prod);
  return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

DenseOperator projector(const HilbertSpace& space, const Vector& psi) {
  require(static_cast<std::size_t>(psi.size()) == space.dim(), ErrorCode::dimension_mismatch,
          "projector: state size does not match space");
  const double n = psi.norm();
  require(n > 0.0, ErrorCode::invalid_argument, "projector: zero state");
  const Vector v = psi / n;
  return {space, v * v.adjoint()};
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(std::string labels) : labels_(std::move(labels)) {
  for (char& c : labels_) {
    switch (c) {
      case 'I': case 'X': case 'Y': case 'Z': break;
      case 'x': case 'y': case 'z': case 'i': c = static_cast<char>(c - 'a' + 'A'); break;
      default: fail(ErrorCode::invalid_argument, "invalid Pauli label '" + std::string(1, c) + "'");
    }
  }
}

PauliString PauliString::single(std::size_t n, std::size_t site, int j) {
  require(site < n, ErrorCode::invalid_argument, "Pauli site out of range");
  require(j >= 0 && j <= 3, ErrorCode::invalid_argument, "Pauli index must be in 0..3");
  std::string s(n, 'I');
  s[site] = "IXYZ"[j];
  return PauliString(std::move(s));
}

int PauliString::index(std::size_t i) const {
  switch (labels_.at(i)) {
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
    default: return 0;
  }
}

std::size_t PauliString::weight() const {
  return static_cast<std::size_t>(std::count_if(labels_.begin(), labels_.end(), [](char c) { return c != 'I'; }));
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 'I') out.push_back(i);
  }
  return out;
}

namespace {

// P|x> = phase(x) |x ^ flip>
struct PauliAction {
  std::size_t flip = 0;
  std::vector<std::pair<std::size_t, int>> sites;  // (bit position, pauli index) for Y/Z
};

PauliAction action_of(const PauliString& p) {
  PauliAction a;
  const std::size_t n = p.size();
  for (std::size_t s = 0; s < n; ++s) {
    const int j = p.index(s);
    const std::size_t bit = n - 1 - s;
    if (j == 1 || j == 2) a.flip |= std::size_t{1} << bit;
    if (j == 2 || j == 3) a.sites.emplace_back(bit, j);
  }
  return a;
}

Complex phase_of(const PauliAction& a, std::size_t x) {
  Complex ph = 1.0;
  for (const auto& [bit, j] : a.sites) {
    const bool one = (x >> bit) & 1U;
    if (j == 3) {
      if (one) ph = -ph;
    } else {
      ph *= one ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
    }
  }
  return ph;
}

}  // namespace

Matrix PauliString::matrix() const {
  const std::size_t d = std::size_t{1} << size();
  const auto a = action_of(*this);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t x = 0; x < d; ++x) {
    m(static_cast<Eigen::Index>(x ^ a.flip), static_cast<Eigen::Index>(x)) = phase_of(a, x);
  }
  return m;
}

DenseOperator PauliString::op() const { return {HilbertSpace::qubits(size()), matrix()}; }

std::vector<std::pair<PauliString, double>> pauli_decompose(const Matrix& m, std::size_t n_qubits,
                                                           double cutoff) {
  const std::size_t d = std::size_t{1} << n_qubits;
  require(static_cast<std::size_t>(m.rows()) == d && static_cast<std::size_t>(m.cols()) == d,
          ErrorCode::dimension_mismatch, "pauli_decompose: matrix is not 2^n x 2^n");
  std::size_t count = 1;
  for (std::size_t i = 0; i < n_qubits; ++i) count *= 4;
  std::vector<std::pair<PauliString, double>> out;
  std::string labels(n_qubits, 'I');
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t c = code;
    for (std::size_t s = n_qubits; s-- > 0;) {
      labels[s] = "IXYZ"[c % 4];
      c /= 4;
    }
    PauliString p(labels);
    const auto a = action_of(p);
    Complex tr = 0.0;
    for (std::size_t y = 0; y < d; ++y) {
      tr += phase_of(a, y) * m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(y ^ a.flip));
    }
    const double coef = tr.real() / static_cast<double>(d);
    if (std::abs(coef) > cutoff) out.emplace_back(std::move(p), coef);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON dump

nlohmann::json to_json(const DenseOperator& op) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  const Matrix& m = op.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ri = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dims", op.space().dims()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DenseOperator operator_from_json(const nlohmann::json& j, FactorKind kind) {
  require(j.is_object() && j.contains("re"), ErrorCode::parse, "operator dump needs an object with 're'");
  const auto& re = j.at("re");
  require(re.is_array() && !re.empty(), ErrorCode::parse, "operator 're' must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(re.size());
  std::vector<std::size_t> dims;
  if (j.contains("dims")) {
    dims = j.at("dims").get<std::vector<std::size_t>>();
  } else {
    dims = {static_cast<std::size_t>(n)};
  }
  std::vector<Factor> factors;
  for (auto d : dims) factors.push_back({kind, d});
  HilbertSpace space(std::move(factors));
  Matrix m = Matrix::Zero(n, n);
  const bool has_im = j.contains("im");
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = re.at(static_cast<std::size_t>(r));
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == n, ErrorCode::parse,
            "operator row " + std::to_string(r) + " has the wrong length");
    for (Eigen::Index c = 0; c < n; ++c) {
      double im = 0.0;
      if (has_im) im = j.at("im").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
      m(r, c) = Complex(row.at(static_cast<std::size_t>(c)).get<double>(), im);
    }
  }
  return {std::move(space), std::move(m)};
}

}  // namespace ddm
