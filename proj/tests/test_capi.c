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

/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "ddm.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static const char* kScenario =
    "{\"name\": \"capi\", \"omega\": 1.0, \"sites\": 1,"
    " \"env\": {\"model\": \"common\", \"dims\": [2]},"
    " \"terms\": [{\"c\": 0.3, \"paulis\": \"X\", \"env_op\": \"pauli_x\"}],"
    " \"noise\": {\"kind\": \"gaussian\", \"sigma\": 0.5},"
    " \"sweep\": {\"N\": [1, 2, 4, 8], \"sigma\": [0.5]}}";

static void test_scalars(void) {
  double qfi = 0, t = 0, rate = 0, bound = 0;
  int unbounded = -1;
  EXPECT(strlen(ddm_version()) > 0);
  EXPECT(ddm_qfi_ghz_gaussian(3, 0.0, 2.0, &qfi) == DDM_OK);
  EXPECT(fabs(qfi - 36.0) < 1e-12);
  EXPECT(ddm_optimal_time(4, 0.5, &t, &rate, &unbounded) == DDM_OK);
  EXPECT(unbounded == 0);
  EXPECT(fabs(rate - 8.0 / sqrt(2.0 * exp(1.0))) < 1e-9);
  EXPECT(ddm_optimal_time(4, 0.0, &t, &rate, &unbounded) == DDM_OK);
  EXPECT(unbounded == 1);
  EXPECT(ddm_parallel_bound_gaussian(4, 0.5, &bound) == DDM_OK);
  EXPECT(fabs(bound - 8.0) < 1e-12);
  EXPECT(ddm_parallel_bound_gaussian(4, 0.0, &bound) == DDM_ERR_UNBOUNDED);
  EXPECT(ddm_qfi_ghz_gaussian(0, 1.0, 1.0, &qfi) == DDM_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(ddm_last_error()) > 0);
  EXPECT(ddm_qfi_ghz_gaussian(1, 1.0, 1.0, NULL) == DDM_ERR_INVALID_ARGUMENT);
}

static void test_direction(void) {
  /* sigma_x (x) X + sigma_y (x) Z: noise plane is xy, r = z. */
  const double c[3] = {1.0, 0.5, 0.0};
  double ops[3 * 8];
  double r[3] = {0, 0, 0}, r3 = 0;
  int feasible = 0;
  memset(ops, 0, sizeof ops);
  /* X: entries (0,1) and (1,0) real 1. */
  ops[2 * 1] = 1.0;
  ops[2 * 2] = 1.0;
  /* Z: entries (0,0) = 1, (1,1) = -1. */
  ops[8 + 0] = 1.0;
  ops[8 + 2 * 3] = -1.0;
  EXPECT(ddm_decoupling_direction(c, ops, 2, r, &r3, &feasible) == DDM_OK);
  EXPECT(feasible == 1);
  EXPECT(fabs(fabs(r[2]) - 1.0) < 1e-9);
  EXPECT(fabs(r3 - 1.0) < 1e-9);

  /* Non-Hermitian input is rejected. */
  ops[2 * 1 + 1] = 1.0;
  EXPECT(ddm_decoupling_direction(c, ops, 2, r, &r3, &feasible) == DDM_ERR_NOT_HERMITIAN);
}

static void test_scenario(void) {
  ddm_scenario* s = NULL;
  ddm_artifacts files = {0};
  ddm_run_options opts;
  char* name = NULL;
  char* hash = NULL;
  size_t i;
  int has_manifest = 0;

  EXPECT(ddm_scenario_parse("{\"name\": ", NULL, &s) == DDM_ERR_PARSE);
  EXPECT(strstr(ddm_last_error(), "line 1") != NULL);
  EXPECT(ddm_scenario_load("/nonexistent/ddm.json", &s) != DDM_OK);

  EXPECT(ddm_scenario_parse(kScenario, NULL, &s) == DDM_OK);
  if (!s) return;
  EXPECT(ddm_scenario_name(s, &name) == DDM_OK);
  EXPECT(name && strcmp(name, "capi") == 0);
  ddm_string_free(name);
  EXPECT(ddm_scenario_hash(s, &hash) == DDM_OK);
  EXPECT(hash && strlen(hash) == 64);
  ddm_string_free(hash);

  memset(&opts, 0, sizeof opts);
  opts.format = DDM_FORMAT_CSV;
  EXPECT(ddm_analyze(s, &opts, &files) == DDM_OK);
  EXPECT(files.count >= 1);
  EXPECT(files.count >= 1 && strstr(files.items[0].content, "rank") != NULL);
  ddm_artifacts_free(&files);
  EXPECT(files.items == NULL && files.count == 0);

  EXPECT(ddm_qfi(s, &opts, &files) == DDM_OK);
  EXPECT(ddm_attach_manifest(s, &opts, &files) == DDM_OK);
  for (i = 0; i < files.count; ++i) {
    if (strcmp(files.items[i].name, "manifest.json") == 0) has_manifest = 1;
  }
  EXPECT(has_manifest);
  ddm_artifacts_free(&files);

  EXPECT(ddm_evolve(s, NULL, &files) != DDM_OK);
  EXPECT(files.count == 0);
  ddm_scenario_free(s);
}

static void test_dimension_cap(void) {
  const size_t old = ddm_dimension_cap();
  EXPECT(ddm_set_dimension_cap(0) == DDM_ERR_INVALID_ARGUMENT);
  EXPECT(ddm_set_dimension_cap(2) == DDM_OK);
  {
    ddm_scenario* s = NULL;
    ddm_artifacts files = {0};
    ddm_run_options opts = {DDM_FORMAT_CSV, 1, 0, 0};
    EXPECT(ddm_scenario_parse(kScenario, NULL, &s) == DDM_OK || s == NULL);
    if (s) {
      EXPECT(ddm_analyze(s, &opts, &files) == DDM_ERR_DIMENSION_CAP);
      ddm_artifacts_free(&files);
      ddm_scenario_free(s);
    }
  }
  EXPECT(ddm_set_dimension_cap(old) == DDM_OK);
}

int main(void) {
  test_scalars();
  test_direction();
  test_scenario();
  test_dimension_cap();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
