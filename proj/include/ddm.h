/*
 * Copyright 2026 The DDM Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libddm.
 *
 * Every function returns a ddm_status. On failure the message for the calling
 * thread is available from ddm_last_error() until the next call on that
 * thread. Strings and string arrays handed out by the library are released
 * with ddm_string_free / ddm_artifacts_free.
 */

#ifndef DDM_H
#define DDM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DDM_BUILDING_LIBRARY)
#    define DDM_API __declspec(dllexport)
#  else
#    define DDM_API __declspec(dllimport)
#  endif
#else
#  define DDM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ddm_status {
  DDM_OK = 0,
  DDM_ERR_INVALID_ARGUMENT = 1,
  DDM_ERR_DIMENSION_MISMATCH = 2,
  DDM_ERR_DIMENSION_CAP = 3,
  DDM_ERR_NOT_HERMITIAN = 4,
  DDM_ERR_NOT_UNITARY = 5,
  DDM_ERR_NOT_DENSITY_MATRIX = 6,
  DDM_ERR_RANK_TOO_HIGH = 7,
  DDM_ERR_UNNORMALIZED = 8,
  DDM_ERR_UNBOUNDED = 9,
  DDM_ERR_PARSE = 10,
  DDM_ERR_IO = 11,
  DDM_ERR_INTERNAL = 12
} ddm_status;

typedef enum ddm_format { DDM_FORMAT_CSV = 0, DDM_FORMAT_JSON = 1 } ddm_format;

typedef struct ddm_scenario ddm_scenario;

/* One emitted file. */
typedef struct ddm_artifact {
  char* name;
  char* content;
} ddm_artifact;

/* Commands return an array of artifacts; element 0 is the primary table. */
typedef struct ddm_artifacts {
  ddm_artifact* items;
  size_t count;
} ddm_artifacts;

typedef struct ddm_run_options {
  ddm_format format;
  size_t threads;    /* 0 selects 1 */
  int has_seed;      /* nonzero: seed overrides the scenario seed */
  uint64_t seed;
} ddm_run_options;

DDM_API const char* ddm_version(void);
DDM_API const char* ddm_status_string(ddm_status status);
DDM_API const char* ddm_last_error(void);

DDM_API ddm_status ddm_scenario_load(const char* path, ddm_scenario** out);
/* base_dir resolves relative file references; may be NULL. */
DDM_API ddm_status ddm_scenario_parse(const char* json_text, const char* base_dir, ddm_scenario** out);
DDM_API void ddm_scenario_free(ddm_scenario* scenario);
DDM_API ddm_status ddm_scenario_name(const ddm_scenario* scenario, char** out);
/* SHA-256 of the canonical scenario text, as lower-case hex. */
DDM_API ddm_status ddm_scenario_hash(const ddm_scenario* scenario, char** out);

DDM_API ddm_status ddm_analyze(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* out);
DDM_API ddm_status ddm_evolve(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* out);
DDM_API ddm_status ddm_qfi(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* out);
DDM_API ddm_status ddm_sweep(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* out);

/* Adds manifest.json (scenario hash, seed, checksums) to a command's output. */
DDM_API ddm_status ddm_attach_manifest(const ddm_scenario* s, const ddm_run_options* opts, ddm_artifacts* files);

/* Writes every artifact into dir, creating it when needed. */
DDM_API ddm_status ddm_artifacts_write(const ddm_artifacts* files, const char* dir);
DDM_API void ddm_artifacts_free(ddm_artifacts* files);
DDM_API void ddm_string_free(char* s);

typedef struct ddm_reproduce_options {
  uint64_t seed;
  double tolerance_scale; /* 1 for the pinned tolerances */
  size_t threads;
} ddm_reproduce_options;

/*
 * Runs the acceptance suite. files receives the tables, summary.csv and
 * manifest.json; summary receives one PASS/FAIL line per criterion.
 */
DDM_API ddm_status ddm_reproduce(const ddm_reproduce_options* opts, ddm_artifacts* files, char** summary,
                                 int* all_passed);

/* Numerical entry points. */
DDM_API ddm_status ddm_qfi_ghz_gaussian(size_t n, double sigma, double t, double* qfi);
/* unbounded is set when sigma = 0 (rate grows without limit). */
DDM_API ddm_status ddm_optimal_time(size_t n, double sigma, double* t_opt, double* rate, int* unbounded);
DDM_API ddm_status ddm_parallel_bound_gaussian(size_t n, double sigma, double* bound);
/*
 * Decoupling direction for single-qubit noise sum_j c_j sigma_j (x) A_j.
 * env_ops holds three row-major dim x dim Hermitian matrices as interleaved
 * (re, im) pairs. feasible = 0 leaves r untouched.
 */
DDM_API ddm_status ddm_decoupling_direction(const double c[3], const double* env_ops, size_t dim, double r[3],
                                            double* r3, int* feasible);

DDM_API size_t ddm_dimension_cap(void);
DDM_API ddm_status ddm_set_dimension_cap(size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* DDM_H */
