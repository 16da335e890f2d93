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

#include <gtest/gtest.h>

#include "gcran/lift.h"
#include "gcran/rng.h"
#include "test_util.h"

namespace gcran {
namespace {

// Entries spread over several decades, some exactly zero.
Eigen::VectorXd random_vector(int m, Stream& s) {
  Eigen::VectorXd z(m);
  for (int i = 0; i < m; ++i) {
    const double u = s.uniform();
    z(i) = u < 0.1 ? 0.0 : std::pow(10.0, -4.0 + 5.0 * s.uniform()) * (s.uniform() < 0.5 ? -1.0 : 1.0);
  }
  return z;
}

TEST(SmoothingParams, Validation) {
  SmoothingParams ok;
  EXPECT_NO_THROW(ok.validate());
  for (double p : {0.0, -0.5, 1.5, std::nan("")}) {
    SmoothingParams bad;
    bad.p = p;
    EXPECT_THROW(bad.validate(), std::invalid_argument) << p;
  }
  SmoothingParams bad;
  bad.epsilon = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = {};
  bad.max_iters = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = {};
  bad.obj_tol = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Smoothing, ValueAndWeightsMatchDefinitions) {
  SmoothingParams params;
  params.p = 0.5;
  params.epsilon = 0.1;
  Eigen::VectorXd z(3);
  z << 0.0, -1.0, 2.0;
  Eigen::VectorXd rho(3);
  rho << 1.0, 2.0, 3.0;
  const double expected = std::pow(0.01, 0.25) + 2.0 * std::pow(1.01, 0.25) + 3.0 * std::pow(4.01, 0.25);
  EXPECT_NEAR(smoothed_lp_value_squared(z.cwiseAbs2(), params, rho), expected, 1e-14);
  const Eigen::VectorXd w = update_weights(z, params, rho);
  EXPECT_NEAR(w(1), 2.0 * 0.25 * std::pow(1.01, -0.75), 1e-14);
  EXPECT_NEAR(majorizer_value(z, w), w(1) + 4.0 * w(2), 1e-14);
  EXPECT_THROW(majorizer_value(z, Eigen::VectorXd::Ones(2)), std::invalid_argument);
}

// f_p(z) - Q(z; w(z0)) is maximized at z0 (majorization), and f_p and the
// majorizer share their value offset and gradient at z0 (tangency).
TEST(Smoothing, MajorizationAndTangency) {
  Stream s(11, "majorization", 0);
  int checked = 0;
  for (int pair = 0; pair < 1000; ++pair) {
    SmoothingParams params;
    params.p = pair % 10 == 0 ? 1.0 : 0.05 + 0.95 * s.uniform();
    params.epsilon = std::pow(10.0, -4.0 + 3.0 * s.uniform());
    const int m = 1 + static_cast<int>(s.uniform() * 12);
    const Eigen::VectorXd z0 = random_vector(m, s);
    const Eigen::VectorXd z = random_vector(m, s);
    Eigen::VectorXd rho(m);
    for (int i = 0; i < m; ++i) rho(i) = 0.1 + 2.0 * s.uniform();
    const Eigen::VectorXd w = update_weights(z0, params, rho);

    const double f0 = smoothed_lp_value_squared(z0.cwiseAbs2(), params, rho);
    const double f = smoothed_lp_value_squared(z.cwiseAbs2(), params, rho);
    const double surrogate = f0 + majorizer_value(z, w) - majorizer_value(z0, w);
    const double scale = std::max({1.0, std::abs(f), std::abs(surrogate)});
    EXPECT_LE(f, surrogate + 1e-10 * scale) << "pair " << pair;

    // Gradient of f_p at z0 equals that of Q(.; w), i.e. 2 w_i z0_i.
    for (int i = 0; i < m; ++i) {
      const double grad =
          rho(i) * params.p * z0(i) * std::pow(z0(i) * z0(i) + params.epsilon * params.epsilon, 0.5 * params.p - 1.0);
      EXPECT_NEAR(grad, 2.0 * w(i) * z0(i), 1e-10 * std::max(1.0, std::abs(grad)));
    }
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

// 0 <= f_p(z; eps) - |z|_p^p <= m eps^p for unit penalty scales.
TEST(Smoothing, EpsilonConsistencyBound) {
  Stream s(12, "eps-consistency", 0);
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    for (double p : {1.0, 0.5, 0.1}) {
      SmoothingParams params;
      params.p = p;
      params.epsilon = eps;
      for (int trial = 0; trial < 100; ++trial) {
        const Eigen::VectorXd z = random_vector(8, s);
        const double lp = z.cwiseAbs().array().pow(p).sum();
        const double gap = smoothed_lp_value(z, params) - lp;
        EXPECT_GE(gap, -1e-12);
        EXPECT_LE(gap, 8 * std::pow(eps, p) * (1 + 1e-12));
      }
    }
  }
}

struct WeightedPowerCase {
  NetworkConfig cfg = testing::small_network(4, 2, {2, 2}, 2.0);
  Channel ch = generate_channel(cfg, 3);

  ReweightedResult run(const SmoothingParams& params) const {
    ReweightedOptions options;
    options.params = params;
    options.rho = Eigen::VectorXd::LinSpaced(4, 0.7, 1.3);
    options.initial_weights = Eigen::VectorXd::Ones(4);
    const auto builder = [&](const Eigen::VectorXd& w) { return build_weighted_power_sdp(w, cfg, ch).problem; };
    const auto extract = [&](const ConicSolution& sol) {
      const LiftedProblem lp = build_weighted_power_sdp(Eigen::VectorXd::Ones(4), cfg, ch);
      return group_powers(extract_lifted(lp, sol, cfg), cfg);
    };
    return reweighted_solve(builder, extract, options);
  }
};

TEST(Reweighted, ObjectiveIsMonotoneAndConverges) {
  const WeightedPowerCase c;
  SmoothingParams params;
  params.max_iters = 40;
  const ReweightedResult r = c.run(params);
  ASSERT_EQ(r.trace.status, TraceStatus::kConverged);
  ASSERT_GE(r.trace.records.size(), 2u);
  EXPECT_LE(r.trace.max_increase(), 1e-6 * std::max(1.0, std::abs(r.trace.records.front().objective)));
  for (size_t i = 0; i < r.trace.records.size(); ++i) {
    EXPECT_EQ(r.trace.records[i].iteration, static_cast<int>(i) + 1);
    EXPECT_EQ(r.trace.records[i].status, SolveStatus::kOptimal);
  }
  const auto& last = r.trace.records.back();
  const auto& prev = r.trace.records[r.trace.records.size() - 2];
  EXPECT_LT(std::abs(last.objective - prev.objective), params.obj_tol);
}

TEST(Reweighted, ReturnedSolutionsAreEpsilonConsistent) {
  const WeightedPowerCase c;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    for (double p : {1.0, 0.5}) {
      SmoothingParams params;
      params.p = p;
      params.epsilon = eps;
      const ReweightedResult r = c.run(params);
      ASSERT_FALSE(r.trace.records.empty());
      const Eigen::VectorXd z2 = r.trace.records.back().magnitudes;
      const double lp = z2.cwiseSqrt().array().pow(p).sum();
      SmoothingParams unit = params;
      const double gap = smoothed_lp_value_squared(z2, unit) - lp;
      EXPECT_GE(gap, -1e-12);
      EXPECT_LE(gap, z2.size() * std::pow(eps, p) * (1 + 1e-9)) << "eps " << eps << " p " << p;
    }
  }
}

TEST(Reweighted, StopsAtTheIterationCap) {
  const WeightedPowerCase c;
  SmoothingParams params;
  params.max_iters = 2;
  params.obj_tol = 1e-14;
  const ReweightedResult r = c.run(params);
  EXPECT_EQ(r.trace.status, TraceStatus::kMaxIterations);
  EXPECT_EQ(r.trace.records.size(), 2u);
}

TEST(Reweighted, ReportsInfeasibleSubproblems) {
  WeightedPowerCase c;
  c.cfg.max_tx_power.setConstant(1e-6);
  const ReweightedResult r = c.run({});
  EXPECT_EQ(r.trace.status, TraceStatus::kInfeasible);
  EXPECT_EQ(r.trace.records.size(), 1u);
  EXPECT_EQ(r.solution.status, SolveStatus::kPrimalInfeasible);
}

TEST(Reweighted, RequiresInitialWeights) {
  ReweightedOptions options;
  EXPECT_THROW(reweighted_solve([](const Eigen::VectorXd&) { return ConicProblem{}; },
                                [](const ConicSolution&) { return Eigen::VectorXd(); }, options),
               std::invalid_argument);
}

TEST(IterTrace, MaxIncrease) {
  IterTrace t;
  EXPECT_EQ(t.max_increase(), -std::numeric_limits<double>::infinity());
  for (double f : {5.0, 4.0, 4.5, 1.0}) {
    IterRecord r;
    r.objective = f;
    t.records.push_back(r);
  }
  EXPECT_DOUBLE_EQ(t.max_increase(), 0.5);
}

}  // namespace
}  // namespace gcran
