// Copyright 2026 The green-cran Authors. All Rights Reserved.
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

// green-cran <experiment> --scenario F [--seeds N | --seed-list LIST]
//            [--sinr-db LIST] [--algos LIST] [--p LIST] [--tol X]
//            [--max-iters N] --out DIR
//
// Exit status: 0 when every audit passed, 1 when any audit failed, 2 on a
// usage, scenario or I/O error.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gcran/experiment.h"
#include "gcran/scenario.h"

namespace {

// Worker count: the hardware concurrency, capped by GREEN_CRAN_THREADS.
int worker_count() {
  int n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GREEN_CRAN_THREADS")) {
    try {
      n = std::min(n, std::max(1, std::stoi(env)));
    } catch (const std::exception&) {
      throw gcran::SpecError(std::string("GREEN_CRAN_THREADS must be an integer, got '") + env + "'");
    }
  }
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green multicast Cloud-RAN experiments"};
  std::string experiment;
  std::string scenario_path;
  std::string out_dir;
  int seed_count = 0;
  std::vector<std::uint64_t> seed_list;
  std::vector<double> sinr_db;
  std::vector<std::string> algorithms;
  std::vector<double> p;
  double tol = 0.0;
  int max_iters = 0;

  app.add_option("experiment", experiment, "convergence, netpower, admission or oracle-audit")->required();
  app.add_option("--scenario", scenario_path, "scenario YAML file")->required()->check(CLI::ExistingFile);
  auto* seeds_opt = app.add_option("--seeds", seed_count, "number of seeds, 0..N-1 (default: the scenario's)");
  app.add_option("--seed-list", seed_list, "explicit comma-separated seeds")->delimiter(',')->excludes(seeds_opt);
  app.add_option("--sinr-db", sinr_db, "comma-separated target SINRs in dB")->delimiter(',');
  app.add_option("--algos", algorithms, "comma-separated subset of ir2a,l1linf,cb,exhaustive,mdr")->delimiter(',');
  app.add_option("--p", p, "comma-separated lp exponents in (0, 1] for ir2a")->delimiter(',');
  auto* tol_opt = app.add_option("--tol", tol, "conic solver tolerance for reweighted subproblems");
  auto* iters_opt = app.add_option("--max-iters", max_iters, "conic solver iteration cap");
  app.add_option("--out", out_dir, "output directory")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    gcran::ExperimentSpec spec;
    spec.experiment = gcran::parse_experiment(experiment);
    if (*seeds_opt) {
      if (seed_count < 1) throw gcran::SpecError("--seeds must be at least 1");
      for (int s = 0; s < seed_count; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
    } else {
      spec.seeds = seed_list;
    }
    spec.sinr_db = sinr_db;
    spec.algorithms = algorithms;
    if (!p.empty()) spec.p = p;
    if (*tol_opt) spec.tol = tol;
    if (*iters_opt) spec.max_iters = max_iters;
    spec.threads = worker_count();

    const gcran::Scenario scenario = gcran::load_scenario(scenario_path);
    spec = gcran::resolve_spec(spec, scenario);
    const gcran::CellOutput output = gcran::run_experiment(spec, scenario);
    gcran::write_outputs(output, spec.experiment, out_dir);

    for (const gcran::AuditFailure& f : output.failures) {
      std::cerr << "audit failure: seed " << f.seed << ", " << gcran::format_double(f.sinr_db) << " dB, "
                << f.algorithm << ": " << f.what << "\n";
    }
    std::cout << gcran::to_string(spec.experiment) << ": " << spec.sinr_db.size() * spec.seeds.size()
              << " cells, " << output.failures.size() << " audit failures, output in " << out_dir << "\n";
    return output.failures.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "green-cran: " << e.what() << "\n";
    return 2;
  }
}
