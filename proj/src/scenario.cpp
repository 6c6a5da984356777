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

#include "ddm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "ddm/rng.hpp"

namespace ddm {

using nlohmann::json;

const char* to_string(StrategyType type) noexcept {
  switch (type) {
    case StrategyType::none: return "none";
    case StrategyType::projection: return "projection";
    case StrategyType::schedule: return "schedule";
    case StrategyType::symmetrize: return "symmetrize";
    case StrategyType::correlated: return "correlated";
  }
  return "unknown";
}

bool Scenario::wants(std::string_view output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::parse, "scenario field " + (path.empty() ? std::string("/") : path) + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      schema_error(path + "/" + key, "unknown field");
    }
  }
}

const json* field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& required(const json& obj, const std::string& path, const char* key) {
  const json* f = field(obj, key);
  if (f == nullptr) schema_error(path + "/" + key, "missing required field");
  return *f;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "expected a finite number");
  return v;
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && j.get<long long>() < 0 && !j.is_number_unsigned())) {
    schema_error(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<std::size_t> counts(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(count(j[i], path + "/" + std::to_string(i)));
  return out;
}

// Re-raises library errors with the location of the field that caused them.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw;
    schema_error(path, e.what());
  }
}

Matrix real_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) schema_error(rp, "matrix must be square");
    for (Eigen::Index c = 0; c < rows; ++c) {
      m(r, c) = number(row[static_cast<std::size_t>(c)], rp + "/" + std::to_string(c));
    }
  }
  return m;
}

DenseOperator env_op_at(const json& spec, std::size_t dim, const std::string& path) {
  return at_path(path, [&] { return environment_operator(spec, dim); });
}

SEHamiltonian parse_hamiltonian(const json& doc) {
  const double omega = field(doc, "omega") ? number(doc["omega"], "/omega") : 1.0;
  const std::size_t sites = count(required(doc, "", "sites"), "/sites");
  if (sites == 0) schema_error("/sites", "must be at least 1");

  EnvModel model = EnvModel::common;
  std::vector<std::size_t> dims{1};
  if (const json* env = field(doc, "env")) {
    only_keys(*env, "/env", {"model", "dims"});
    const std::string m = text(required(*env, "/env", "model"), "/env/model");
    if (m == "independent") {
      model = EnvModel::independent;
    } else if (m != "common") {
      schema_error("/env/model", "expected \"independent\" or \"common\"");
    }
    dims = counts(required(*env, "/env", "dims"), "/env/dims");
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (dims[i] == 0) schema_error("/env/dims/" + std::to_string(i), "dimensions must be positive");
    }
  } else if (field(doc, "terms") && !doc["terms"].empty()) {
    schema_error("/env", "noise terms need an environment");
  }
  SEHamiltonian h = at_path("/env", [&] { return SEHamiltonian(omega, sites, model, dims); });

  if (const json* terms = field(doc, "terms")) {
    if (!terms->is_array()) schema_error("/terms", "expected an array");
    for (std::size_t i = 0; i < terms->size(); ++i) {
      const std::string p = "/terms/" + std::to_string(i);
      const json& t = (*terms)[i];
      only_keys(t, p, {"c", "paulis", "env_op", "env_factor"});
      const double c = number(required(t, p, "c"), p + "/c");
      const std::string labels = text(required(t, p, "paulis"), p + "/paulis");
      const PauliString ps = at_path(p + "/paulis", [&] { return PauliString(labels); });
      if (ps.size() != sites) schema_error(p + "/paulis", "expected " + std::to_string(sites) + " Pauli labels");
      if (ps.is_identity()) schema_error(p + "/paulis", "identity terms belong in \"trivial\"");
      std::size_t factor = 0;
      if (const json* ef = field(t, "env_factor")) {
        factor = count(*ef, p + "/env_factor");
      } else if (model == EnvModel::independent) {
        factor = ps.support().front();
      }
      if (factor >= dims.size()) schema_error(p + "/env_factor", "environment factor out of range");
      const DenseOperator local = env_op_at(required(t, p, "env_op"), dims[factor], p + "/env_op");
      at_path(p, [&] {
        h.add_term(c, ps, h.env_factor_op(local, factor));
        return 0;
      });
    }
  }
  if (const json* tr = field(doc, "trivial")) {
    only_keys(*tr, "/trivial", {"c", "env_op", "env_factor"});
    const double c = number(required(*tr, "/trivial", "c"), "/trivial/c");
    const std::size_t factor = field(*tr, "env_factor") ? count((*tr)["env_factor"], "/trivial/env_factor") : 0;
    if (factor >= dims.size()) schema_error("/trivial/env_factor", "environment factor out of range");
    const DenseOperator local = env_op_at(required(*tr, "/trivial", "env_op"), dims[factor], "/trivial/env_op");
    at_path("/trivial", [&] {
      h.set_trivial(c, h.env_factor_op(local, factor));
      return 0;
    });
  }
  return h;
}

DenseOperator gate_from_json(const json& g, std::size_t sites, const std::string& path) {
  const HilbertSpace sys = HilbertSpace::qubits(sites);
  if (g.is_string()) {
    const PauliString ps = at_path(path, [&] { return PauliString(g.get<std::string>()); });
    if (ps.size() != sites) schema_error(path, "expected " + std::to_string(sites) + " Pauli labels");
    return ps.op();
  }
  only_keys(g, path, {"re", "im"});
  Matrix m = real_matrix(required(g, path, "re"), path + "/re");
  if (const json* im = field(g, "im")) {
    const Matrix mi = real_matrix(*im, path + "/im");
    if (mi.rows() != m.rows()) schema_error(path + "/im", "shape differs from re");
    m += Complex(0.0, 1.0) * mi;
  }
  if (static_cast<std::size_t>(m.rows()) != sys.dim()) schema_error(path, "gate dimension must be 2^sites");
  return at_path(path, [&] { return DenseOperator(sys, m); });
}

PulseSchedule parse_schedule(const json& s, std::size_t sites, const std::string& path) {
  only_keys(s, path, {"frames", "gates", "times"});
  const bool has_frames = field(s, "frames") != nullptr;
  const bool has_gates = field(s, "gates") != nullptr;
  if (has_frames == has_gates) schema_error(path, "give exactly one of \"frames\" or \"gates\"");
  const std::string list_key = has_frames ? "frames" : "gates";
  const json& list = s[list_key];
  if (!list.is_array() || list.empty()) schema_error(path + "/" + list_key, "expected a non-empty array");
  std::vector<DenseOperator> ops;
  for (std::size_t i = 0; i < list.size(); ++i) {
    ops.push_back(gate_from_json(list[i], sites, path + "/" + list_key + "/" + std::to_string(i)));
  }
  std::vector<double> times;
  if (const json* t = field(s, "times")) {
    times = numbers(*t, path + "/times");
  } else {
    for (std::size_t i = 0; i <= ops.size(); ++i) times.push_back(static_cast<double>(i) / static_cast<double>(ops.size()));
  }
  return at_path(path, [&] {
    return has_frames ? PulseSchedule::from_frames(ops, std::move(times)) : PulseSchedule(std::move(ops), std::move(times));
  });
}

json read_json_file(const std::filesystem::path& path, const std::string& field_path) {
  std::ifstream in(path);
  if (!in) schema_error(field_path, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    schema_error(field_path, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

UnitVector3 direction(const json& j, const std::string& path) {
  const auto v = numbers(j, path);
  if (v.size() != 3) schema_error(path, "expected three components");
  return at_path(path, [&] { return UnitVector3::normalized(Eigen::Vector3d(v[0], v[1], v[2])); });
}

StrategySpec parse_strategy(const json& s, const std::optional<SEHamiltonian>& h, const std::filesystem::path& base) {
  StrategySpec out;
  if (s.is_string()) {
    if (s.get<std::string>() != "none" && s.get<std::string>() != "symmetrize") {
      schema_error("/strategy", "only \"none\" and \"symmetrize\" may be given as a bare string");
    }
    out.type = s.get<std::string>() == "none" ? StrategyType::none : StrategyType::symmetrize;
    return out;
  }
  only_keys(s, "/strategy", {"type", "r", "schedule", "file", "k"});
  const std::string type = text(required(s, "/strategy", "type"), "/strategy/type");
  if (type == "none") {
    out.type = StrategyType::none;
  } else if (type == "projection") {
    out.type = StrategyType::projection;
    out.r = direction(required(s, "/strategy", "r"), "/strategy/r");
  } else if (type == "symmetrize") {
    out.type = StrategyType::symmetrize;
    if (const json* r = field(s, "r")) out.r = direction(*r, "/strategy/r");
  } else if (type == "schedule") {
    out.type = StrategyType::schedule;
    if (!h) schema_error("/strategy", "a schedule strategy needs a Hamiltonian (\"sites\")");
    if (const json* sched = field(s, "schedule")) {
      out.schedule = parse_schedule(*sched, h->sites(), "/strategy/schedule");
    } else if (const json* file = field(s, "file")) {
      const std::filesystem::path p = base / text(*file, "/strategy/file");
      out.schedule = parse_schedule(read_json_file(p, "/strategy/file"), h->sites(), "/strategy/file");
    } else {
      schema_error("/strategy", "a schedule strategy needs \"schedule\" or \"file\"");
    }
  } else if (type == "correlated") {
    out.type = StrategyType::correlated;
    out.k = count(required(s, "/strategy", "k"), "/strategy/k");
  } else {
    schema_error("/strategy/type", "unknown strategy '" + type + "'");
  }
  return out;
}

std::optional<double> uniform_gap(const std::vector<double>& pts) {
  if (pts.size() < 2) return std::nullopt;
  std::vector<double> s = pts;
  std::sort(s.begin(), s.end());
  const double gap = s[1] - s[0];
  if (gap <= 0.0) return std::nullopt;
  for (std::size_t i = 2; i < s.size(); ++i) {
    if (std::abs((s[i] - s[i - 1]) - gap) > 1e-12 * std::max(1.0, gap)) return std::nullopt;
  }
  return gap;
}

NoiseSpec parse_noise(const json& n) {
  only_keys(n, "/noise",
            {"kind", "mean", "sigma", "points", "weights", "offset", "gap", "c_bar", "grid", "density", "components",
             "correlation"});
  NoiseSpec out;
  const std::string kind = text(required(n, "/noise", "kind"), "/noise/kind");
  out.c_bar = field(n, "c_bar") ? number(n["c_bar"], "/noise/c_bar") : 1.0;
  if (out.c_bar == 0.0) schema_error("/noise/c_bar", "must be nonzero");
  if (kind == "gaussian") {
    const double mean = field(n, "mean") ? number(n["mean"], "/noise/mean") : 0.0;
    const double sigma = number(required(n, "/noise", "sigma"), "/noise/sigma");
    out.spectrum = at_path("/noise", [&] { return NoiseDistribution::gaussian(mean, sigma); });
  } else if (kind == "discrete") {
    const auto pts = numbers(required(n, "/noise", "points"), "/noise/points");
    const auto w = numbers(required(n, "/noise", "weights"), "/noise/weights");
    out.spectrum = at_path("/noise", [&] { return NoiseDistribution::discrete(pts, w); });
    out.gap = uniform_gap(pts);
  } else if (kind == "equally_gapped") {
    const double offset = field(n, "offset") ? number(n["offset"], "/noise/offset") : 0.0;
    const double gap = number(required(n, "/noise", "gap"), "/noise/gap");
    const auto w = numbers(required(n, "/noise", "weights"), "/noise/weights");
    out.spectrum = at_path("/noise", [&] { return NoiseDistribution::equally_gapped(offset, gap, w); });
    out.gap = gap;
  } else if (kind == "tabulated") {
    const auto grid = numbers(required(n, "/noise", "grid"), "/noise/grid");
    const auto dens = numbers(required(n, "/noise", "density"), "/noise/density");
    out.spectrum = at_path("/noise", [&] { return NoiseDistribution::tabulated(grid, dens); });
  } else if (kind == "mixture") {
    const json& comps = required(n, "/noise", "components");
    if (!comps.is_array()) schema_error("/noise/components", "expected an array");
    std::vector<NoiseDistribution::Component> cs;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string p = "/noise/components/" + std::to_string(i);
      only_keys(comps[i], p, {"weight", "mean", "sigma"});
      cs.push_back({number(required(comps[i], p, "weight"), p + "/weight"),
                    number(required(comps[i], p, "mean"), p + "/mean"),
                    number(required(comps[i], p, "sigma"), p + "/sigma")});
    }
    out.spectrum = at_path("/noise", [&] { return NoiseDistribution::mixture(cs); });
  } else {
    schema_error("/noise/kind", "unknown noise kind '" + kind + "'");
  }
  out.distribution = at_path("/noise/c_bar", [&] { return out.spectrum.scaled(out.c_bar); });
  if (const json* c = field(n, "correlation")) {
    const std::string corr = text(*c, "/noise/correlation");
    if (corr == "local") {
      out.correlation = NoiseCorrelation::local;
    } else if (corr != "collective") {
      schema_error("/noise/correlation", "expected \"collective\" or \"local\"");
    }
  }
  return out;
}

SweepSpec parse_sweep(const json& s) {
  only_keys(s, "/sweep", {"N", "sigma", "t", "m", "time"});
  SweepSpec out;
  auto non_empty = [](const auto& v, const char* p) {
    if (v.empty()) schema_error(p, "grid must not be empty");
  };
  if (const json* n = field(s, "N")) {
    out.n = counts(*n, "/sweep/N");
    non_empty(out.n, "/sweep/N");
    for (auto v : out.n) {
      if (v == 0) schema_error("/sweep/N", "qubit counts must be positive");
    }
  }
  if (const json* v = field(s, "sigma")) {
    out.sigma = numbers(*v, "/sweep/sigma");
    non_empty(out.sigma, "/sweep/sigma");
    for (double x : out.sigma) {
      if (x < 0.0) schema_error("/sweep/sigma", "sigma must be non-negative");
    }
  }
  if (const json* v = field(s, "t")) {
    out.t = numbers(*v, "/sweep/t");
    non_empty(out.t, "/sweep/t");
    for (double x : out.t) {
      if (x < 0.0) schema_error("/sweep/t", "times must be non-negative");
    }
  }
  if (const json* v = field(s, "m")) {
    out.m = counts(*v, "/sweep/m");
    non_empty(out.m, "/sweep/m");
    for (auto x : out.m) {
      if (x == 0) schema_error("/sweep/m", "cycle counts must be positive");
    }
  }
  if (const json* v = field(s, "time")) {
    out.time = number(*v, "/sweep/time");
    if (out.time <= 0.0) schema_error("/sweep/time", "must be positive");
  }
  return out;
}

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

DenseOperator environment_operator(const json& spec, std::size_t dim) {
  const HilbertSpace space = HilbertSpace::environment({dim});
  if (spec.is_string()) {
    const std::string name = spec.get<std::string>();
    auto need_qubit = [&] { require(dim == 2, ErrorCode::invalid_argument, name + " needs a two-dimensional factor"); };
    if (name == "pauli_x" || name == "pauli_y" || name == "pauli_z") {
      need_qubit();
      return DenseOperator(space, pauli(name == "pauli_x" ? 1 : name == "pauli_y" ? 2 : 3).matrix());
    }
    if (name == "identity") return DenseOperator::identity(space);
    if (name == "number_op") {
      Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (std::size_t i = 0; i < dim; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = static_cast<double>(i);
      return DenseOperator(space, m);
    }
    const std::string prefix = "random_hermitian:";
    if (name.rfind(prefix, 0) == 0) {
      std::uint64_t seed = 0;
      try {
        std::size_t used = 0;
        seed = std::stoull(name.substr(prefix.size()), &used);
        require(used == name.size() - prefix.size(), ErrorCode::invalid_argument, "bad seed");
      } catch (const std::exception&) {
        fail(ErrorCode::invalid_argument, "random_hermitian needs an unsigned integer seed");
      }
      CounterRng rng(seed, 0);
      std::normal_distribution<double> nd;
      const auto d = static_cast<Eigen::Index>(dim);
      Matrix g(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(nd(rng), nd(rng));
      }
      return DenseOperator(space, (g + g.adjoint()) * 0.5);
    }
    fail(ErrorCode::invalid_argument, "unknown environment operator preset '" + name + "'");
  }
  require(spec.is_object() && spec.contains("re"), ErrorCode::invalid_argument,
          "environment operator must be a preset name or {\"re\", \"im\"}");
  Matrix m = real_matrix(spec["re"], "/re");
  if (spec.contains("im")) m += Complex(0.0, 1.0) * real_matrix(spec["im"], "/im");
  require(static_cast<std::size_t>(m.rows()) == dim, ErrorCode::dimension_mismatch,
          "inline operator has dimension " + std::to_string(m.rows()) + ", factor has " + std::to_string(dim));
  return DenseOperator(space, m);
}

Scenario parse_scenario(std::string_view source, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse, "scenario is not valid JSON at " + location(source, e.byte) + ": " + e.what());
  }
  only_keys(doc, "", {"name", "omega", "sites", "env", "terms", "trivial", "strategy", "noise", "sweep", "seed",
                      "outputs", "noise_variances"});
  Scenario s;
  s.canonical = doc.dump();
  if (const json* n = field(doc, "name")) s.name = text(*n, "/name");
  if (field(doc, "sites")) {
    s.hamiltonian = parse_hamiltonian(doc);
  } else if (field(doc, "omega") || field(doc, "terms") || field(doc, "trivial") || field(doc, "env")) {
    schema_error("/sites", "Hamiltonian fields need \"sites\"");
  }
  if (const json* st = field(doc, "strategy")) s.strategy = parse_strategy(*st, s.hamiltonian, base_dir);
  if (s.strategy.type == StrategyType::correlated && s.hamiltonian && s.strategy.k >= s.hamiltonian->sites()) {
    schema_error("/strategy/k", "noise range must be smaller than the number of sites");
  }
  if (const json* n = field(doc, "noise")) s.noise = parse_noise(*n);
  if (const json* sw = field(doc, "sweep")) s.sweep = parse_sweep(*sw);
  if (const json* seed = field(doc, "seed")) {
    if (!seed->is_number_unsigned()) schema_error("/seed", "expected an unsigned 64-bit integer");
    s.seed = seed->get<std::uint64_t>();
  }
  if (const json* outs = field(doc, "outputs")) {
    static const std::set<std::string> known{"standard_form", "feasibility", "direction", "convergence", "qfi",
                                             "scaling",       "revival",     "monte_carlo", "bound"};
    if (!outs->is_array()) schema_error("/outputs", "expected an array of strings");
    for (std::size_t i = 0; i < outs->size(); ++i) {
      const std::string o = text((*outs)[i], "/outputs/" + std::to_string(i));
      if (!known.contains(o)) schema_error("/outputs/" + std::to_string(i), "unknown output '" + o + "'");
      s.outputs.push_back(o);
    }
  }
  if (const json* v = field(doc, "noise_variances")) {
    const auto vals = numbers(*v, "/noise_variances");
    if (vals.size() != 3) schema_error("/noise_variances", "expected three values");
    for (std::size_t i = 0; i < 3; ++i) {
      if (vals[i] < 0.0) schema_error("/noise_variances", "variances must be non-negative");
      s.noise_variances[i] = vals[i];
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open scenario file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

}  // namespace ddm
