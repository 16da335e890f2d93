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

// Smoothed lp penalty and the iteratively reweighted-l2 majorization-
// minimization loop.
//
//   f_p(z; eps)  = sum_i rho_i (z_i^2 + eps^2)^{p/2}
//   Q(z; w)      = sum_i w_i z_i^2
//   w_i(z0)      = rho_i (p/2) (z0_i^2 + eps^2)^{p/2 - 1}
//
// For 0 < p <= 1, f_p - Q(., w(z0)) is maximized at z0, so minimizing Q over
// the constraint set never increases f_p.  The loop only ever needs z_i^2,
// which the subproblem delivers directly (group powers, squared slacks).

#ifndef GCRAN_SPARSEOPT_H_
#define GCRAN_SPARSEOPT_H_

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gcran/conic.h"

namespace gcran {

struct SmoothingParams {
  double p = 1.0;
  double epsilon = 1e-3;
  int max_iters = 30;
  double obj_tol = 1e-3;

  // Throws std::invalid_argument unless 0 < p <= 1, epsilon > 0,
  // max_iters >= 1 and obj_tol > 0.
  void validate() const;
};

double smoothed_lp_value(const Eigen::VectorXd& z, const SmoothingParams& params);
double majorizer_value(const Eigen::VectorXd& z, const Eigen::VectorXd& weights);

// rho defaults to all ones when empty.
Eigen::VectorXd update_weights(const Eigen::VectorXd& z, const SmoothingParams& params,
                               const Eigen::VectorXd& rho = Eigen::VectorXd());

// Same, from squared magnitudes.
Eigen::VectorXd update_weights_squared(const Eigen::VectorXd& z_squared, const SmoothingParams& params,
                                       const Eigen::VectorXd& rho = Eigen::VectorXd());

// rho-weighted f_p from squared magnitudes.
double smoothed_lp_value_squared(const Eigen::VectorXd& z_squared, const SmoothingParams& params,
                                 const Eigen::VectorXd& rho = Eigen::VectorXd());

enum class TraceStatus { kConverged, kMaxIterations, kInfeasible, kSolverFailure };

const char* to_string(TraceStatus status);

struct IterRecord {
  int iteration = 0;              // 1-based count of subproblem solves
  double objective = 0.0;         // f_p at the new iterate
  Eigen::VectorXd weights;        // weights the subproblem was solved with
  SolveStatus status = SolveStatus::kOptimal;
  Eigen::VectorXd magnitudes;     // z_i^2 of the new iterate
  int solver_iterations = 0;
};

struct IterTrace {
  std::vector<IterRecord> records;
  TraceStatus status = TraceStatus::kMaxIterations;

  // Largest f^{n+1} - f^n over the trace (-inf for fewer than two records).
  double max_increase() const;
};

struct ReweightedResult {
  // Last successful subproblem solution; the failing one when the very first
  // subproblem fails.
  ConicSolution solution;
  IterTrace trace;
};

struct ReweightedOptions {
  SmoothingParams params;
  ConicSettings solver;
  Eigen::VectorXd rho;              // per-entry penalty scale; ones if empty
  Eigen::VectorXd initial_weights;  // required, positive
  bool warm_start = true;
};

using SubproblemBuilder = std::function<ConicProblem(const Eigen::VectorXd& weights)>;
// Squared magnitudes z_i^2 of a solved subproblem.
using MagnitudeExtractor = std::function<Eigen::VectorXd(const ConicSolution& solution)>;

ReweightedResult reweighted_solve(const SubproblemBuilder& builder, const MagnitudeExtractor& extract,
                                  const ReweightedOptions& options);

}  // namespace gcran

#endif  // GCRAN_SPARSEOPT_H_
