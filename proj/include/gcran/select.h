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

// RRH selection and user admission pipelines plus their baselines.
//
// Network power: reweighted group-sparse SDP, RRH ordering, bisection over
// ordered switch-off prefixes, transmit-power SDP over the survivors, then
// beamformer recovery.  Admission: reweighted slack SDP, slack ordering,
// bisection over removal prefixes, transmit-power SDP, recovery.
//
// A set is "feasible" iff its feasibility SDP solves Optimal; MaxIterations
// counts as infeasible and marks the result degraded.  Ties break by
// ascending index everywhere.

#ifndef GCRAN_SELECT_H_
#define GCRAN_SELECT_H_

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gcran/conic.h"
#include "gcran/lift.h"
#include "gcran/model.h"
#include "gcran/recover.h"
#include "gcran/sparseopt.h"

namespace gcran {

// ---------------------------------------------------------------------------
// Ordering and bisection.

struct RrhOrdering {
  Eigen::VectorXd theta;   // per RRH
  std::vector<int> order;  // ascending theta; first entries switch off first
};

// theta_l = sqrt(eta_l kappa_l / P^c_l) * sqrt(group power of RRH l), with
// kappa_l the channel energy from RRH l to every user.  P^c_l = 0 gives
// theta_l = +inf (switching it off saves nothing).
RrhOrdering rrh_ordering(const LiftedVars& q, const NetworkConfig& cfg, const Channel& ch);

enum class SearchMode { kRrh, kUser };

// oracle(i): is the problem feasible after dropping the first i ordered
// entries?  Must be monotone: feasible in RRH mode for i <= J0 only, feasible
// in USER mode for i >= N0 only.
using PrefixOracle = std::function<bool(int)>;

struct BisectionResult {
  int cut = 0;           // J0 (RRH mode) or N0 (USER mode), in [0, count]
  int oracle_calls = 0;  // <= 1 + ceil(log2(1 + count))
  bool non_monotone = false;  // only set in verification mode
};

// RRH mode takes i = 0 as feasible and count + 1 as infeasible; USER mode
// takes i = -1 as infeasible and i = count as feasible.  Neither end is
// queried.  With `verify`, the full linear scan is run as well and any
// disagreement is flagged; the bisection answer is still returned.
BisectionResult bisection_cut(int count, const PrefixOracle& oracle, SearchMode mode, bool verify = false);

// ---------------------------------------------------------------------------
// Pipelines.

struct PipelineParams {
  SmoothingParams smoothing;
  ConicSettings solver;   // reweighted subproblems
  ConicSettings oracle;   // feasibility solves
  ConicSettings transmit; // transmit-power solves feeding recovery
  RecoveryOptions recovery;
  Eigen::VectorXd initial_weights;  // ones when empty
  bool verify_monotone = false;
  bool warm_start = true;

  PipelineParams();
};

enum class PlanStatus { kOptimal, kInfeasible, kRecoveryFailed, kSolverFailure };

const char* to_string(PlanStatus status);

struct PlanResult {
  PlanStatus status = PlanStatus::kSolverFailure;
  std::vector<int> active_rrhs;  // A*, ascending
  int switched_off = 0;          // J0
  Beamformer beamformers;
  PowerBreakdown power;          // of the recovered beamformers
  double sdr_transmit_w = 0.0;   // transmit-power SDP optimum over A*
  double sdr_network_w = 0.0;    // sdr_transmit_w + fronthaul of A*
  IterTrace trace;
  int oracle_calls = 0;
  RecoveryReport recovery;
  bool degraded = false;         // some solve hit MaxIterations
  bool non_monotone = false;
};

struct AdmissionResult {
  PlanStatus status = PlanStatus::kSolverFailure;
  std::vector<int> admitted;  // S*, ascending
  int removed = 0;            // N0
  Beamformer beamformers;
  double transmit_w = 0.0;    // of the recovered beamformers
  double sdr_transmit_w = 0.0;
  IterTrace trace;
  int oracle_calls = 0;
  RecoveryReport recovery;
  bool degraded = false;
  bool non_monotone = false;
};

// Step 0 infeasible gives status kInfeasible: the caller runs admission.
PlanResult network_power_min(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params = {});

AdmissionResult user_admission(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params = {});

// Transmit-power SDP with every RRH active and every user served.
PlanResult coordinated_beamforming(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params = {});

// Reweighted l1/linf baseline: RRHs with the smallest largest-entry
// magnitude in their covariance rows switch off first.
PlanResult linf_pipeline(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params = {});

// Iterative deflation on the l1 slack relaxation.
AdmissionResult mdr_admission(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params = {});

inline constexpr int kMaxExhaustive = 10;

// All RRH subsets; minimizes the relaxed network power.  Throws
// std::invalid_argument when L > kMaxExhaustive.
PlanResult exhaustive_rrh(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params = {});

// User subsets by decreasing size; the first size with a feasible subset
// wins, ties by lower relaxed transmit power.  Throws when K > kMaxExhaustive.
AdmissionResult exhaustive_users(const NetworkConfig& cfg, const Channel& ch, const PipelineParams& params = {});

// Feasibility of serving `users` from `rrhs` under the relaxation.
enum class Feasibility { kFeasible, kInfeasible, kUnknown };
Feasibility check_feasible(const std::vector<int>& rrhs, const std::vector<int>& users, const NetworkConfig& cfg,
                           const Channel& ch, const ConicSettings& settings);

}  // namespace gcran

#endif  // GCRAN_SELECT_H_
