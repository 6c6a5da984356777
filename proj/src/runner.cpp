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

#include "ddm/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddm/parallel.hpp"
#include "ddm/report.hpp"

namespace ddm {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMonteCarloDraws = 10000;

const SEHamiltonian& need_hamiltonian(const Scenario& s, const char* command) {
  if (!s.hamiltonian) fail(ErrorCode::parse, std::string(command) + " needs a Hamiltonian (\"sites\", \"terms\")");
  return *s.hamiltonian;
}

const NoiseSpec& need_noise(const Scenario& s, const char* command) {
  if (!s.noise) fail(ErrorCode::parse, std::string(command) + " needs a \"noise\" section");
  return *s.noise;
}

json vec3(const Eigen::Vector3d& v) { return json::array({json_number(v.x()), json_number(v.y()), json_number(v.z())}); }

// ---------------------------------------------------------------------------
// analyze

struct SiteReport {
  std::size_t site;
  StandardForm sf;
  int rank;
  FeasibilityReport feas;
  std::string verdict;
  Eigen::Vector3d r;
  double r3;
  double merit;
};

SiteReport analyze_site(const SEHamiltonian& h, std::size_t site, const Scenario& s, std::size_t threads) {
  SiteReport rep{site, standard_form(h, site), 0, feasibility(h, site), "", Eigen::Vector3d::UnitZ(), 1.0, kInf};
  rep.rank = noise_rank(rep.sf).rank;
  const DirectionOptimum opt = optimize_direction(rep.sf, s.noise_variances, 32, threads);
  rep.merit = opt.unbounded ? kInf : opt.merit;
  if (rep.rank <= 2) {
    const DecouplingDirection dd = decoupling_direction(rep.sf);
    if (dd.feasible) {
      rep.verdict = "decouple";
      rep.r = dd.r->vector();
      rep.r3 = dd.r3;
      return rep;
    }
    rep.verdict = "infeasible";
  } else {
    rep.verdict = "reduce to parallel noise";
  }
  rep.r = opt.r.vector();
  rep.r3 = opt.r.z();
  return rep;
}

json effective_json(const Scenario& s) {
  const SEHamiltonian eff = apply_strategy(s);
  json sig = json::array();
  for (const auto& t : eff.signal()) sig.push_back({{"paulis", t.paulis.str()}, {"weight", json_number(t.weight)}});
  json out{{"strategy", to_string(s.strategy.type)},
           {"signal", std::move(sig)},
           {"noise_terms", eff.terms().size()},
           {"noise_max_norm", json_number(eff.noise_matrix().max_abs())},
           {"trivial", eff.trivial().has_value()}};
  if (s.strategy.type == StrategyType::correlated) {
    out["scheme"] = correlated_scheme(eff.sites(), s.strategy.k).to_json();
  }
  return out;
}

// ---------------------------------------------------------------------------
// qfi / sweep

struct QfiRow {
  std::size_t n;
  double sigma;
  double t_opt;
  double rate;
  double bound;
  double ratio;
  double revival_t = 0.0;
  double revival_coherence = 0.0;
};

QfiRow qfi_row(const NoiseSpec& noise, std::size_t n, std::optional<double> sigma_override) {
  NoiseDistribution base = noise.distribution;
  if (sigma_override) base = NoiseDistribution::gaussian(base.mean(), *sigma_override);
  const NoiseDistribution dist = noise.correlation == NoiseCorrelation::collective ? base : site_average(base, n);
  QfiRow row{n, std::sqrt(base.variance()), kInf, kInf, kInf, kInf};
  if (noise.gap) {
    row.revival_t = revival_time(*noise.gap, noise.c_bar);
    row.revival_coherence = std::abs(ghz_coherence({n, dist, row.revival_t, 0.0}));
  }
  if (dist.is_discrete()) return row;
  const double sd = std::sqrt(dist.variance());
  if (sd == 0.0) return row;
  const OptimalTime opt = maximize_rate([&](double t) { return qfi_ghz(n, dist, t).qfi_per_time; },
                                        10.0 / (static_cast<double>(n) * sd));
  row.t_opt = opt.t_opt;
  row.rate = opt.rate;
  const MaybeUnbounded bound = parallel_bound(n, dist);
  row.bound = bound.unbounded ? kInf : bound.value;
  row.ratio = bound.unbounded ? 0.0 : opt.rate / bound.value;
  return row;
}

std::vector<std::optional<double>> sigma_grid(const Scenario& s, const NoiseSpec& noise) {
  std::vector<std::optional<double>> out;
  if (s.sweep.sigma.empty()) {
    out.emplace_back(std::nullopt);
    return out;
  }
  if (noise.distribution.kind() != NoiseKind::gaussian) {
    fail(ErrorCode::parse, "scenario field /sweep/sigma: a sigma grid applies to gaussian noise only");
  }
  for (double x : s.sweep.sigma) out.emplace_back(x);
  return out;
}

std::vector<QfiRow> qfi_rows(const Scenario& s, const NoiseSpec& noise, std::size_t threads) {
  const auto sigmas = sigma_grid(s, noise);
  const std::size_t total = sigmas.size() * s.sweep.n.size();
  std::vector<QfiRow> rows(total);
  parallel_for(total, threads, [&](std::size_t i) {
    rows[i] = qfi_row(noise, s.sweep.n[i % s.sweep.n.size()], sigmas[i / s.sweep.n.size()]);
  });
  return rows;
}

std::vector<json> scaling_fits(const Scenario& s, const std::vector<QfiRow>& rows) {
  std::vector<json> fits;
  const std::size_t per = s.sweep.n.size();
  for (std::size_t start = 0; start < rows.size(); start += per) {
    std::vector<double> ns, rates;
    for (std::size_t i = start; i < start + per; ++i) {
      if (std::isfinite(rows[i].rate) && rows[i].rate > 0.0) {
        ns.push_back(static_cast<double>(rows[i].n));
        rates.push_back(rows[i].rate);
      }
    }
    std::vector<double> distinct = ns;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 4) continue;
    json f = fit_scaling(ns, rates).to_json();
    f["sigma"] = json_number(rows[start].sigma);
    fits.push_back(std::move(f));
  }
  return fits;
}

// Noiseless fallback for sweeps without a noise section: F = N^2 t^2 at the sweep time.
std::vector<json> noiseless_fits(const Scenario& s) {
  std::vector<double> ns, f;
  for (auto n : s.sweep.n) {
    ns.push_back(static_cast<double>(n));
    f.push_back(qfi_ghz_gaussian(n, 0.0, s.sweep.time).qfi);
  }
  json j = fit_scaling(ns, f).to_json();
  j["sigma"] = 0;
  return {j};
}

bool has_revival(const NoiseSpec& noise) { return noise.gap.has_value(); }

std::string qfi_table_csv(const std::vector<QfiRow>& rows, bool revival) {
  std::vector<std::string> header{"N", "sigma", "t_opt", "qfi_rate", "bound", "ratio"};
  if (revival) {
    header.emplace_back("revival_t");
    header.emplace_back("revival_coherence");
  }
  CsvTable t(header);
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.n),    format_number(r.sigma), format_number(r.t_opt),
                                   format_number(r.rate),  format_number(r.bound), format_number(r.ratio)};
    if (revival) {
      cells.push_back(format_number(r.revival_t));
      cells.push_back(format_number(r.revival_coherence));
    }
    t.row(std::move(cells));
  }
  return t.str();
}

json qfi_rows_json(const std::vector<QfiRow>& rows, bool revival) {
  json out = json::array();
  for (const auto& r : rows) {
    json j{{"N", r.n},
           {"sigma", json_number(r.sigma)},
           {"t_opt", json_number(r.t_opt)},
           {"qfi_rate", json_number(r.rate)},
           {"bound", json_number(r.bound)},
           {"ratio", json_number(r.ratio)}};
    if (revival) {
      j["revival_t"] = json_number(r.revival_t);
      j["revival_coherence"] = json_number(r.revival_coherence);
    }
    out.push_back(std::move(j));
  }
  return out;
}

json fits_json(const std::vector<json>& fits) {
  if (fits.size() == 1) return fits.front();
  return json(fits);
}

}  // namespace

NoiseDistribution site_average(const NoiseDistribution& p, std::size_t n) {
  require(n >= 1, ErrorCode::invalid_argument, "site count must be positive");
  if (n == 1) return p;
  const double nn = static_cast<double>(n);
  if (p.kind() == NoiseKind::gaussian) {
    const auto& c = p.components().front();
    return NoiseDistribution::gaussian(c.mean, c.sigma / std::sqrt(nn));
  }
  require(p.kind() != NoiseKind::tabulated, ErrorCode::invalid_argument,
          "local fluctuations need a gaussian, discrete or mixture distribution");
  NoiseDistribution sum = p;
  for (std::size_t k = 1; k < n; ++k) sum = convolve(sum, p);
  return sum.scaled(1.0 / nn);
}

SEHamiltonian apply_strategy(const Scenario& s) {
  const SEHamiltonian& h = need_hamiltonian(s, "strategy");
  const std::size_t n = h.sites();
  switch (s.strategy.type) {
    case StrategyType::none:
      return h;
    case StrategyType::projection: {
      SEHamiltonian out = h;
      const UnitalMap single = projection_map(*s.strategy.r);
      for (std::size_t a = 0; a < n; ++a) out = apply_map(single.on_site(a, n), out);
      return out;
    }
    case StrategyType::schedule:
      return apply_map(schedule_to_map(*s.strategy.schedule), h);
    case StrategyType::symmetrize: {
      const UnitVector3 r = s.strategy.r.value_or(UnitVector3::z_axis());
      SEHamiltonian out = h;
      const UnitalMap single = projection_map(r);
      for (std::size_t a = 0; a < n; ++a) out = apply_map(single.on_site(a, n), out);
      if (r.z() < 1.0 - 1e-15) out = apply_map(alignment_map(r, n), out);
      return symmetrize(out).hamiltonian;
    }
    case StrategyType::correlated:
      return correlated_scheme(n, s.strategy.k).apply(h);
  }
  return h;
}

RunOutput run_analyze(const Scenario& s, const RunOptions& opts) {
  const SEHamiltonian& h = need_hamiltonian(s, "analyze");
  std::vector<SiteReport> sites;
  for (std::size_t a = 0; a < h.sites(); ++a) sites.push_back(analyze_site(h, a, s, opts.threads));

  if (opts.format == OutputFormat::csv) {
    CsvTable t({"site", "rank", "b1", "b2", "b3", "n1_x", "n1_y", "n1_z", "n2_x", "n2_y", "n2_z", "n3_x", "n3_y",
                "n3_z", "feasible", "slowdown", "residual", "r_x", "r_y", "r_z", "r3", "merit", "verdict"});
    for (const auto& r : sites) {
      std::vector<std::string> cells{std::to_string(r.site), std::to_string(r.rank)};
      for (double b : r.sf.b) cells.push_back(format_number(b));
      for (const auto& n : r.sf.frame) {
        for (std::size_t i = 0; i < 3; ++i) cells.push_back(format_number(n[i]));
      }
      cells.push_back(r.feas.feasible ? "1" : "0");
      cells.push_back(format_number(r.feas.slowdown));
      cells.push_back(format_number(r.feas.residual));
      for (int i = 0; i < 3; ++i) cells.push_back(format_number(r.r(i)));
      cells.push_back(format_number(r.r3));
      cells.push_back(format_number(r.merit));
      cells.push_back(r.verdict);
      t.row(std::move(cells));
    }
    return {{"analyze.csv", t.str()}};
  }

  json arr = json::array();
  for (const auto& r : sites) {
    json frame = json::array();
    for (const auto& n : r.sf.frame) frame.push_back(vec3(n.vector()));
    json alphas = nullptr;
    if (r.feas.alphas) alphas = {json_number((*r.feas.alphas)[0]), json_number((*r.feas.alphas)[1])};
    arr.push_back({{"site", r.site},
                   {"rank", r.rank},
                   {"b", {json_number(r.sf.b[0]), json_number(r.sf.b[1]), json_number(r.sf.b[2])}},
                   {"frame", std::move(frame)},
                   {"feasible", r.feas.feasible},
                   {"alphas", std::move(alphas)},
                   {"slowdown", json_number(r.feas.slowdown)},
                   {"residual", json_number(r.feas.residual)},
                   {"r", vec3(r.r)},
                   {"r3", json_number(r.r3)},
                   {"merit", json_number(r.merit)},
                   {"verdict", r.verdict}});
  }
  json out{{"name", s.name}, {"sites", std::move(arr)}};
  if (s.strategy.type != StrategyType::none) out["effective"] = effective_json(s);
  return {{"analyze.json", dump_json(out)}};
}

RunOutput run_evolve(const Scenario& s, const RunOptions& opts) {
  const SEHamiltonian& h = need_hamiltonian(s, "evolve");
  std::optional<PulseSchedule> cycle = s.strategy.schedule;
  if (!cycle && s.strategy.type == StrategyType::projection && h.sites() == 1) {
    cycle = PulseSchedule::from_frames({sigma_n(*s.strategy.r), pauli(0)}, {0.0, 0.5, 1.0});
  }
  if (!cycle) fail(ErrorCode::parse, "evolve needs a schedule strategy (or a single-qubit projection)");
  const ConvergenceReport rep = trotter_convergence(h, *cycle, s.sweep.time, s.sweep.m, opts.threads);
  if (opts.format == OutputFormat::csv) {
    CsvTable t({"m", "error", "fitted_order"});
    for (const auto& p : rep.points) {
      t.row({std::to_string(p.cycles), format_number(p.error), format_number(rep.fitted_order)});
    }
    return {{"evolve.csv", t.str()}};
  }
  json pts = json::array();
  for (const auto& p : rep.points) pts.push_back({{"m", p.cycles}, {"error", json_number(p.error)}});
  return {{"evolve.json",
           dump_json({{"name", s.name},
                      {"time", json_number(s.sweep.time)},
                      {"points", std::move(pts)},
                      {"fitted_order", json_number(rep.fitted_order)}})}};
}

RunOutput run_qfi(const Scenario& s, const RunOptions& opts) {
  const NoiseSpec& noise = need_noise(s, "qfi");
  const std::vector<QfiRow> rows = qfi_rows(s, noise, opts.threads);
  const bool revival = has_revival(noise);
  const std::vector<json> fits = scaling_fits(s, rows);

  std::optional<CsvTable> mc;
  json mc_json = json::array();
  if (s.wants("monte_carlo")) {
    const auto seed = opts.seed ? opts.seed : s.seed;
    if (!seed) fail(ErrorCode::parse, "scenario field /seed: the monte_carlo output needs a seed");
    if (noise.distribution.kind() != NoiseKind::gaussian) {
      fail(ErrorCode::parse, "scenario field /noise/kind: the monte_carlo output needs gaussian noise");
    }
    mc.emplace(std::vector<std::string>{"N", "sigma", "draws", "empirical_std", "expected_std", "standard_error",
                                        "within_3se"});
    const double sigma = std::sqrt(noise.distribution.variance());
    for (auto n : s.sweep.n) {
      const VarianceCheck v = sample_mean_coupling(n, sigma, kMonteCarloDraws, *seed, opts.threads);
      mc->row({std::to_string(n), format_number(sigma), std::to_string(v.draws), format_number(v.empirical_std),
               format_number(v.expected_std), format_number(v.standard_error), v.within_three_se ? "1" : "0"});
      mc_json.push_back({{"N", n},
                         {"sigma", json_number(sigma)},
                         {"draws", v.draws},
                         {"empirical_std", json_number(v.empirical_std)},
                         {"expected_std", json_number(v.expected_std)},
                         {"standard_error", json_number(v.standard_error)},
                         {"within_3se", v.within_three_se}});
    }
  }

  if (opts.format == OutputFormat::csv) {
    RunOutput out{{"qfi.csv", qfi_table_csv(rows, revival)}};
    if (!fits.empty()) out.push_back({"scaling.json", dump_json(fits_json(fits))});
    if (mc) out.push_back({"monte_carlo.csv", mc->str()});
    return out;
  }
  json j{{"name", s.name}, {"convention", kQfiConvention}, {"rows", qfi_rows_json(rows, revival)}};
  if (!fits.empty()) j["scaling"] = fits_json(fits);
  if (mc) j["monte_carlo"] = std::move(mc_json);
  return {{"qfi.json", dump_json(j)}};
}

RunOutput run_sweep(const Scenario& s, const RunOptions& opts) {
  if (!s.noise) {
    if (s.sweep.n.size() < 4) fail(ErrorCode::parse, "scenario field /sweep/N: a sweep needs at least four values");
    const auto fits = noiseless_fits(s);
    if (opts.format == OutputFormat::csv) {
      CsvTable t({"N", "t", "qfi"});
      for (auto n : s.sweep.n) {
        t.row({std::to_string(n), format_number(s.sweep.time), format_number(qfi_ghz_gaussian(n, 0.0, s.sweep.time).qfi)});
      }
      return {{"sweep.csv", t.str()}, {"scaling.json", dump_json(fits_json(fits))}};
    }
    return {{"sweep.json", dump_json({{"name", s.name}, {"scaling", fits_json(fits)}})}};
  }
  if (s.sweep.n.size() < 4) fail(ErrorCode::parse, "scenario field /sweep/N: a sweep needs at least four values");
  // Same rows as qfi over the full grid; only the primary file name differs.
  RunOutput out = run_qfi(s, opts);
  out.front().name = opts.format == OutputFormat::csv ? "sweep.csv" : "sweep.json";
  return out;
}

}  // namespace ddm
