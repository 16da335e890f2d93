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

#include "gcran/sparseopt.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gcran {

using Eigen::VectorXd;

void SmoothingParams::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(obj_tol > 0.0)) throw std::invalid_argument("obj_tol must be positive");
}

namespace {

VectorXd scale_or_ones(const VectorXd& rho, Eigen::Index n) {
  if (rho.size() == 0) return VectorXd::Ones(n);
  if (rho.size() != n) throw std::invalid_argument("penalty scale length mismatch");
  return rho;
}

}  // namespace

double smoothed_lp_value(const VectorXd& z, const SmoothingParams& params) {
  return smoothed_lp_value_squared(z.cwiseAbs2(), params);
}

double smoothed_lp_value_squared(const VectorXd& z_squared, const SmoothingParams& params, const VectorXd& rho) {
  const VectorXd r = scale_or_ones(rho, z_squared.size());
  const double eps2 = params.epsilon * params.epsilon;
  double total = 0.0;
  for (Eigen::Index i = 0; i < z_squared.size(); ++i) total += r(i) * std::pow(z_squared(i) + eps2, 0.5 * params.p);
  return total;
}

double majorizer_value(const VectorXd& z, const VectorXd& weights) {
  if (z.size() != weights.size()) throw std::invalid_argument("majorizer: length mismatch");
  return weights.dot(z.cwiseAbs2());
}

VectorXd update_weights(const VectorXd& z, const SmoothingParams& params, const VectorXd& rho) {
  return update_weights_squared(z.cwiseAbs2(), params, rho);
}

VectorXd update_weights_squared(const VectorXd& z_squared, const SmoothingParams& params, const VectorXd& rho) {
  const VectorXd r = scale_or_ones(rho, z_squared.size());
  const double eps2 = params.epsilon * params.epsilon;
  VectorXd w(z_squared.size());
  for (Eigen::Index i = 0; i < z_squared.size(); ++i) {
    w(i) = r(i) * 0.5 * params.p * std::pow(z_squared(i) + eps2, 0.5 * params.p - 1.0);
  }
  return w;
}

const char* to_string(TraceStatus status) {
  switch (status) {
    case TraceStatus::kConverged:
      return "Converged";
    case TraceStatus::kMaxIterations:
      return "MaxIterations";
    case TraceStatus::kInfeasible:
      return "Infeasible";
    case TraceStatus::kSolverFailure:
      return "SolverFailure";
  }
  return "Unknown";
}

double IterTrace::max_increase() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < records.size(); ++i) {
    worst = std::max(worst, records[i].objective - records[i - 1].objective);
  }
  return worst;
}

ReweightedResult reweighted_solve(const SubproblemBuilder& builder, const MagnitudeExtractor& extract,
                                  const ReweightedOptions& options) {
  options.params.validate();
  ReweightedResult result;
  if (options.initial_weights.size() == 0) throw std::invalid_argument("reweighted_solve: initial weights required");
  VectorXd weights = options.initial_weights;
  WarmStart warm;
  bool have_warm = false;
  for (int n = 1; n <= options.params.max_iters; ++n) {
    const ConicProblem problem = builder(weights);
    ConicSolution sol = solve(problem, options.solver, options.warm_start && have_warm ? &warm : nullptr);
    IterRecord rec;
    rec.iteration = n;
    rec.weights = weights;
    rec.status = sol.status;
    rec.solver_iterations = sol.iterations;
    if (sol.status == SolveStatus::kPrimalInfeasible) {
      result.trace.records.push_back(rec);
      result.trace.status = TraceStatus::kInfeasible;
      if (n == 1) result.solution = std::move(sol);
      return result;
    }
    if (sol.status != SolveStatus::kOptimal) {
      result.trace.records.push_back(rec);
      result.trace.status = TraceStatus::kSolverFailure;
      if (n == 1) result.solution = std::move(sol);
      return result;
    }
    rec.magnitudes = extract(sol);
    const VectorXd rho = scale_or_ones(options.rho, rec.magnitudes.size());
    rec.objective = smoothed_lp_value_squared(rec.magnitudes, options.params, rho);
    const bool converged = !result.trace.records.empty() &&
                           std::abs(result.trace.records.back().objective - rec.objective) < options.params.obj_tol;
    weights = update_weights_squared(rec.magnitudes, options.params, rho);
    result.trace.records.push_back(std::move(rec));
    warm = {sol.x, sol.y, sol.s};
    have_warm = true;
    result.solution = std::move(sol);
    if (converged) {
      result.trace.status = TraceStatus::kConverged;
      return result;
    }
  }
  result.trace.status = TraceStatus::kMaxIterations;
  return result;
}

}  // namespace gcran
