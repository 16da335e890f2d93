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

// Experiment runner: (target SINR, seed) cells, CSV rows and audits.
//
// Every cell is a pure function of (scenario, SINR, seed, spec), so cells
// run on any number of threads and are reduced in cell order; reruns are
// byte-identical.

#ifndef GCRAN_EXPERIMENT_H_
#define GCRAN_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcran/scenario.h"
#include "gcran/select.h"

namespace gcran {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { kConvergence, kNetpower, kAdmission, kOracleAudit };

const char* to_string(Experiment e);
// Throws SpecError on an unknown name.
Experiment parse_experiment(const std::string& name);

struct ExperimentSpec {
  Experiment experiment = Experiment::kNetpower;
  std::vector<std::uint64_t> seeds;
  std::vector<double> sinr_db;          // empty: the scenario's own list
  std::vector<std::string> algorithms;  // empty: every valid one
  std::vector<double> p = {1.0};        // ir2a only
  std::optional<double> tol;            // reweighted subproblems
  std::optional<int> max_iters;
  int threads = 1;
};

// Algorithms valid for an experiment, in output order.
std::vector<std::string> default_algorithms(Experiment e, const NetworkConfig& cfg);

// Fills defaults and checks algorithm names, p values and enumeration
// guards.  Throws SpecError with a descriptive message.
ExperimentSpec resolve_spec(ExperimentSpec spec, const Scenario& scenario);

PipelineParams pipeline_params(const ExperimentSpec& spec, double p);

// ---------------------------------------------------------------------------
// Rows.

struct ConvergenceRow {
  std::uint64_t seed = 0;
  std::string init_label;
  int iteration = 0;
  double objective = 0.0;
};

struct NetpowerRow {
  std::uint64_t seed = 0;
  double sinr_db = 0.0;
  std::string algorithm;
  std::optional<double> p;
  std::string status;
  // Set only for status Optimal.
  std::optional<double> network_w, transmit_w, fronthaul_w, rank_ratio_max;
  std::optional<int> active_rrhs;
  int iterations = 0;
};

struct AdmissionRow {
  std::uint64_t seed = 0;
  double sinr_db = 0.0;
  std::string algorithm;
  std::optional<double> p;
  std::string status;
  std::optional<int> admitted, removed;
  std::optional<double> transmit_w;
};

struct OracleAuditRow {
  std::uint64_t seed = 0;
  double sinr_db = 0.0;
  std::string mode;  // rrh or user
  std::string status;
  int cut = 0;
  int oracle_calls = 0;
  int call_bound = 0;
  bool non_monotone = false;
  std::optional<int> exhaustive_cut;  // best size found by enumeration
};

struct AuditFailure {
  std::uint64_t seed = 0;
  double sinr_db = 0.0;
  std::string algorithm;
  std::string what;
};

struct CellOutput {
  std::vector<ConvergenceRow> convergence;
  std::vector<NetpowerRow> netpower;
  std::vector<AdmissionRow> admission;
  std::vector<OracleAuditRow> oracle_audit;
  std::vector<AuditFailure> failures;

  void append(CellOutput&& other);
};

// One (SINR, seed) cell.  `spec` must come from resolve_spec.
CellOutput run_convergence_cell(const NetworkConfig& cfg, double sinr_db, std::uint64_t seed,
                                const ExperimentSpec& spec);
// Infeasible cells add admission rows for the admission algorithms
// requested, or ir2a when none are.
CellOutput run_netpower_cell(const NetworkConfig& cfg, double sinr_db, std::uint64_t seed,
                             const ExperimentSpec& spec);
CellOutput run_admission_cell(const NetworkConfig& cfg, double sinr_db, std::uint64_t seed,
                              const ExperimentSpec& spec);
CellOutput run_oracle_audit_cell(const NetworkConfig& cfg, double sinr_db, std::uint64_t seed,
                                 const ExperimentSpec& spec);

// Every cell of `spec` on `spec.threads` workers, reduced in (SINR, seed)
// order.
CellOutput run_experiment(const ExperimentSpec& spec, const Scenario& scenario);

// ---------------------------------------------------------------------------
// CSV.

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);
void write_netpower_csv(const std::vector<NetpowerRow>& rows, std::ostream& out);
void write_admission_csv(const std::vector<AdmissionRow>& rows, std::ostream& out);
void write_oracle_audit_csv(const std::vector<OracleAuditRow>& rows, std::ostream& out);
// Per (table, sinr_db, algorithm, p) cell: row count, Optimal count and the
// means over Optimal rows.
void write_summary_csv(const CellOutput& output, std::ostream& out);

// Writes the experiment's CSVs plus summary.csv into `dir`, creating it.
// Throws std::runtime_error when a file cannot be written.
void write_outputs(const CellOutput& output, Experiment e, const std::string& dir);

// Shortest round-trip decimal form, independent of the locale.
std::string format_double(double v);

}  // namespace gcran

#endif  // GCRAN_EXPERIMENT_H_
