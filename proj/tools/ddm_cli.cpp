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

// ddm command-line tool. Talks to the library only through ddm.h.
//
// Exit status: 0 success, 1 an acceptance criterion failed, 2 a scenario or
// argument error.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>

#include "ddm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

int report(ddm_status st) {
  std::cerr << "ddm: " << ddm_status_string(st);
  const char* msg = ddm_last_error();
  if (msg && *msg) std::cerr << ": " << msg;
  std::cerr << "\n";
  return kExitError;
}

struct CommandArgs {
  std::string scenario;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, CommandArgs& a, bool needs_scenario) {
  auto* sc = sub->add_option("--scenario", a.scenario, "scenario JSON file")->check(CLI::ExistingFile);
  if (needs_scenario) sc->required();
  sub->add_option("--out", a.out, "directory receiving every artifact and manifest.json");
  a.seed_opt = sub->add_option("--seed", a.seed, "64-bit seed for every random draw");
  sub->add_option("--threads", a.threads, "worker threads")->check(CLI::PositiveNumber);
}

using Command = ddm_status (*)(const ddm_scenario*, const ddm_run_options*, ddm_artifacts*);

int run_command(Command cmd, const CommandArgs& a) {
  ddm_scenario* scenario = nullptr;
  if (ddm_status st = ddm_scenario_load(a.scenario.c_str(), &scenario); st != DDM_OK) return report(st);

  ddm_run_options opts{};
  opts.format = a.format == "json" ? DDM_FORMAT_JSON : DDM_FORMAT_CSV;
  opts.threads = a.threads;
  opts.has_seed = a.seed_opt->count() > 0 ? 1 : 0;
  opts.seed = a.seed;

  ddm_artifacts files{};
  int code = kExitOk;
  if (ddm_status st = cmd(scenario, &opts, &files); st != DDM_OK) {
    code = report(st);
  } else {
    if (files.count > 0) std::fputs(files.items[0].content, stdout);
    if (!a.out.empty()) {
      ddm_status st2 = ddm_attach_manifest(scenario, &opts, &files);
      if (st2 == DDM_OK) st2 = ddm_artifacts_write(&files, a.out.c_str());
      if (st2 != DDM_OK) code = report(st2);
    }
  }
  ddm_artifacts_free(&files);
  ddm_scenario_free(scenario);
  return code;
}

int run_reproduce(const CommandArgs& a, double tolerance_scale) {
  ddm_reproduce_options opts{};
  opts.seed = a.seed_opt->count() > 0 ? a.seed : 1;
  opts.tolerance_scale = tolerance_scale;
  opts.threads = a.threads;
  ddm_artifacts files{};
  char* summary = nullptr;
  int all_passed = 0;
  if (ddm_status st = ddm_reproduce(&opts, &files, &summary, &all_passed); st != DDM_OK) return report(st);
  std::fputs(summary, stdout);
  ddm_string_free(summary);
  int code = all_passed ? kExitOk : kExitFailed;
  const std::string dir = a.out.empty() ? "reproduction" : a.out;
  if (ddm_status st = ddm_artifacts_write(&files, dir.c_str()); st != DDM_OK) code = report(st);
  ddm_artifacts_free(&files);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoupling and metrology analysis for qubit systems under parallel noise", "ddm"};
  app.set_version_flag("--version", std::string(ddm_version()));
  app.require_subcommand(1);

  CommandArgs analyze, evolve, qfi, sweep, reproduce;
  double tolerance_scale = 1.0;

  auto* a = app.add_subcommand("analyze", "standard form, feasibility and recommended decoupling direction");
  auto* e = app.add_subcommand("evolve", "Trotter convergence of the scheduled evolution");
  auto* q = app.add_subcommand("qfi", "optimal-time QFI rates against the parallel-noise bound");
  auto* s = app.add_subcommand("sweep", "QFI over the full grid plus scaling fits");
  auto* r = app.add_subcommand("reproduce-paper", "run every acceptance criterion and write its tables");

  for (auto [sub, args] : {std::pair{a, &analyze}, std::pair{e, &evolve}, std::pair{q, &qfi}, std::pair{s, &sweep}}) {
    add_common(sub, *args, true);
    sub->add_option("--format", args->format, "output format")->check(CLI::IsMember({"csv", "json"}));
  }
  add_common(r, reproduce, false);
  r->add_option("--tolerance-scale", tolerance_scale, "multiplies every acceptance tolerance")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kExitOk : kExitError;
  }

  if (const char* cap = std::getenv("DDM_DIM_CAP"); cap && *cap) {
    // The library reads the variable itself; this only rejects junk early.
    char* end = nullptr;
    const unsigned long long v = std::strtoull(cap, &end, 10);
    if (!end || *end != '\0' || v == 0) {
      std::cerr << "ddm: DDM_DIM_CAP must be a positive integer\n";
      return kExitError;
    }
  }

  if (*a) return run_command(ddm_analyze, analyze);
  if (*e) return run_command(ddm_evolve, evolve);
  if (*q) return run_command(ddm_qfi, qfi);
  if (*s) return run_command(ddm_sweep, sweep);
  return run_reproduce(reproduce, tolerance_scale);
}
