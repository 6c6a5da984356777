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

#include "ddm.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "ddm/decoupling.hpp"
#include "ddm/metrology.hpp"
#include "ddm/reproduce.hpp"
#include "ddm/runner.hpp"
#include "ddm/scenario.hpp"

struct ddm_scenario {
  ddm::Scenario value;
};

namespace {

thread_local std::string g_last_error;

ddm_status to_status(ddm::ErrorCode code) {
  using ddm::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return DDM_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return DDM_ERR_DIMENSION_MISMATCH;
    case ErrorCode::dimension_cap: return DDM_ERR_DIMENSION_CAP;
    case ErrorCode::not_hermitian: return DDM_ERR_NOT_HERMITIAN;
    case ErrorCode::not_unitary: return DDM_ERR_NOT_UNITARY;
    case ErrorCode::not_density_matrix: return DDM_ERR_NOT_DENSITY_MATRIX;
    case ErrorCode::rank_too_high: return DDM_ERR_RANK_TOO_HIGH;
    case ErrorCode::unnormalized: return DDM_ERR_UNNORMALIZED;
    case ErrorCode::unbounded: return DDM_ERR_UNBOUNDED;
    case ErrorCode::parse: return DDM_ERR_PARSE;
    case ErrorCode::io: return DDM_ERR_IO;
  }
  return DDM_ERR_INTERNAL;
}

template <class Fn>
ddm_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return DDM_OK;
  } catch (const ddm::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DDM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DDM_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  ddm::require(p != nullptr, ddm::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ddm::RunOutput from_c(const ddm_artifacts* files) {
  ddm::RunOutput out;
  for (size_t i = 0; i < files->count; ++i) out.push_back({files->items[i].name, files->items[i].content});
  return out;
}

void to_c(const ddm::RunOutput& files, ddm_artifacts* out) {
  ddm_artifacts tmp{static_cast<ddm_artifact*>(std::calloc(files.size() ? files.size() : 1, sizeof(ddm_artifact))),
                    0};
  if (!tmp.items) throw std::bad_alloc();
  try {
    for (const auto& f : files) {
      tmp.items[tmp.count].name = dup_string(f.name);
      tmp.items[tmp.count].content = dup_string(f.content);
      ++tmp.count;
    }
  } catch (...) {
    ddm_artifacts_free(&tmp);
    throw;
  }
  *out = tmp;
}

ddm::RunOptions run_options(const ddm_run_options* opts) {
  ddm::RunOptions o;
  if (!opts) return o;
  ddm::require(opts->format == DDM_FORMAT_CSV || opts->format == DDM_FORMAT_JSON, ddm::ErrorCode::invalid_argument,
               "unknown output format");
  o.format = opts->format == DDM_FORMAT_JSON ? ddm::OutputFormat::json : ddm::OutputFormat::csv;
  o.threads = opts->threads == 0 ? 1 : opts->threads;
  if (opts->has_seed) o.seed = opts->seed;
  return o;
}

using Command = ddm::RunOutput (*)(const ddm::Scenario&, const ddm::RunOptions&);

ddm_status run_command(Command cmd, const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* out) {
  return guarded([&] {
    need(s, "scenario");
    need(out, "output");
    to_c(cmd(s->value, run_options(opts)), out);
  });
}

}  // namespace

extern "C" {

const char* ddm_version(void) { return DDM_VERSION_STRING; }

const char* ddm_status_string(ddm_status status) {
  switch (status) {
    case DDM_OK: return "ok";
    case DDM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DDM_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case DDM_ERR_DIMENSION_CAP: return "dimension cap exceeded";
    case DDM_ERR_NOT_HERMITIAN: return "operator is not Hermitian";
    case DDM_ERR_NOT_UNITARY: return "operator is not unitary";
    case DDM_ERR_NOT_DENSITY_MATRIX: return "not a density matrix";
    case DDM_ERR_RANK_TOO_HIGH: return "noise rank too high";
    case DDM_ERR_UNNORMALIZED: return "distribution is not normalized";
    case DDM_ERR_UNBOUNDED: return "quantity is unbounded";
    case DDM_ERR_PARSE: return "scenario parse error";
    case DDM_ERR_IO: return "i/o error";
    case DDM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ddm_last_error(void) { return g_last_error.c_str(); }

ddm_status ddm_scenario_load(const char* path, ddm_scenario** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "output");
    *out = new ddm_scenario{ddm::load_scenario(path)};
  });
}

ddm_status ddm_scenario_parse(const char* json_text, const char* base_dir, ddm_scenario** out) {
  return guarded([&] {
    need(json_text, "scenario text");
    need(out, "output");
    *out = new ddm_scenario{ddm::parse_scenario(json_text, base_dir ? base_dir : "")};
  });
}

void ddm_scenario_free(ddm_scenario* scenario) { delete scenario; }

ddm_status ddm_scenario_name(const ddm_scenario* scenario, char** out) {
  return guarded([&] {
    need(scenario, "scenario");
    need(out, "output");
    *out = dup_string(scenario->value.name);
  });
}

ddm_status ddm_scenario_hash(const ddm_scenario* scenario, char** out) {
  return guarded([&] {
    need(scenario, "scenario");
    need(out, "output");
    *out = dup_string(ddm::sha256_hex(scenario->value.canonical));
  });
}

ddm_status ddm_analyze(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* out) {
  return run_command(ddm::run_analyze, s, opts, out);
}

ddm_status ddm_evolve(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* out) {
  return run_command(ddm::run_evolve, s, opts, out);
}

ddm_status ddm_qfi(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* out) {
  return run_command(ddm::run_qfi, s, opts, out);
}

ddm_status ddm_sweep(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* out) {
  return run_command(ddm::run_sweep, s, opts, out);
}

ddm_status ddm_attach_manifest(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* files) {
  return guarded([&] {
    need(s, "scenario");
    need(files, "artifacts");
    ddm::RunOutput out = from_c(files);
    std::optional<std::uint64_t> seed = s->value.seed;
    if (opts && opts->has_seed) seed = opts->seed;
    out.push_back({"manifest.json", ddm::build_manifest(out, ddm::sha256_hex(s->value.canonical), seed)});
    ddm_artifacts fresh{};
    to_c(out, &fresh);
    ddm_artifacts_free(files);
    *files = fresh;
  });
}

ddm_status ddm_artifacts_write(const ddm_artifacts* files, const char* dir) {
  return guarded([&] {
    need(files, "artifacts");
    need(dir, "directory");
    ddm::write_artifacts(from_c(files), dir);
  });
}

void ddm_artifacts_free(ddm_artifacts* files) {
  if (!files) return;
  for (size_t i = 0; i < files->count; ++i) {
    std::free(files->items[i].name);
    std::free(files->items[i].content);
  }
  std::free(files->items);
  files->items = nullptr;
  files->count = 0;
}

void ddm_string_free(char* s) { std::free(s); }

ddm_status ddm_reproduce(const ddm_reproduce_options* opts, ddm_artifacts* files, char** summary, int* all_passed) {
  return guarded([&] {
    need(opts, "options");
    ddm::ReproduceOptions o;
    o.seed = opts->seed;
    o.tolerance_scale = opts->tolerance_scale;
    o.threads = opts->threads == 0 ? 1 : opts->threads;
    ddm::require(o.tolerance_scale >= 0.0 && std::isfinite(o.tolerance_scale), ddm::ErrorCode::invalid_argument,
                 "tolerance scale must be finite and non-negative");
    const ddm::ReproduceReport rep = ddm::reproduce_paper(o);
    char* text = summary ? dup_string(ddm::summary_text(rep)) : nullptr;
    try {
      if (files) to_c(rep.files, files);
    } catch (...) {
      std::free(text);
      throw;
    }
    if (summary) *summary = text;
    if (all_passed) *all_passed = rep.all_passed ? 1 : 0;
  });
}

ddm_status ddm_qfi_ghz_gaussian(size_t n, double sigma, double t, double* qfi) {
  return guarded([&] {
    need(qfi, "output");
    *qfi = ddm::qfi_ghz_gaussian(n, sigma, t).qfi;
  });
}

ddm_status ddm_optimal_time(size_t n, double sigma, double* t_opt, double* rate, int* unbounded) {
  return guarded([&] {
    const ddm::OptimalTime o = ddm::optimal_time(n, sigma);
    if (t_opt) *t_opt = o.t_opt;
    if (rate) *rate = o.rate;
    if (unbounded) *unbounded = o.unbounded ? 1 : 0;
  });
}

ddm_status ddm_parallel_bound_gaussian(size_t n, double sigma, double* bound) {
  return guarded([&] {
    need(bound, "output");
    const ddm::MaybeUnbounded b = ddm::parallel_bound(n, ddm::NoiseDistribution::gaussian(0.0, sigma));
    ddm::require(!b.unbounded, ddm::ErrorCode::unbounded, "the bound is unbounded for a point-mass distribution");
    *bound = b.value;
  });
}

ddm_status ddm_decoupling_direction(const double c[3], const double* env_ops, size_t dim, double r[3], double* r3,
                                    int* feasible) {
  return guarded([&] {
    need(c, "couplings");
    need(env_ops, "environment operators");
    need(r, "direction");
    need(r3, "r3");
    need(feasible, "feasible");
    ddm::require(dim >= 1, ddm::ErrorCode::invalid_argument, "environment dimension must be positive");
    const ddm::HilbertSpace env = ddm::HilbertSpace::environment({dim});
    const auto d = static_cast<Eigen::Index>(dim);
    std::array<ddm::DenseOperator, 4> ops{ddm::DenseOperator::identity(env), {}, {}, {}};
    for (std::size_t j = 0; j < 3; ++j) {
      ddm::Matrix m(d, d);
      const double* base = env_ops + 2 * j * dim * dim;
      for (Eigen::Index row = 0; row < d; ++row) {
        for (Eigen::Index col = 0; col < d; ++col) {
          const std::size_t k = 2 * static_cast<std::size_t>(row * d + col);
          m(row, col) = ddm::Complex(base[k], base[k + 1]);
        }
      }
      ops[j + 1] = ddm::DenseOperator(env, m);
    }
    const ddm::SEHamiltonian h = ddm::single_qubit(1.0, {0.0, c[0], c[1], c[2]}, ops);
    const ddm::DecouplingDirection dd = ddm::decoupling_direction(ddm::standard_form(h));
    *feasible = dd.feasible ? 1 : 0;
    *r3 = dd.feasible ? dd.r3 : 0.0;
    if (dd.feasible && dd.r) {
      for (std::size_t i = 0; i < 3; ++i) r[i] = (*dd.r)[i];
    }
  });
}

size_t ddm_dimension_cap(void) { return ddm::dimension_cap(); }

ddm_status ddm_set_dimension_cap(size_t cap) {
  return guarded([&] { ddm::set_dimension_cap(cap); });
}

}  // extern "C"
