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

#include "gcran/recover.h"

#include <cmath>

#include <gtest/gtest.h>

#include "gcran/rng.h"
#include "test_util.h"

namespace gcran {
namespace {

using testing::small_network;

Eigen::VectorXcd random_vector(int n, Stream& s) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = s.complex_normal();
  return v;
}

TEST(RankRatio, KnownMatrices) {
  Stream s(1, "rank", 0);
  const Eigen::VectorXcd v = random_vector(4, s);
  EXPECT_LE(rank_ratio(v * v.adjoint()), 1e-14);
  EXPECT_EQ(rank_ratio(Eigen::MatrixXcd::Zero(3, 3)), 0.0);
  EXPECT_NEAR(rank_ratio(Eigen::MatrixXcd::Identity(3, 3)), 1.0, 1e-14);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 4.0;
  d(2, 2) = 1.0;
  EXPECT_NEAR(rank_ratio(d), 0.25, 1e-14);
}

TEST(ExtractRankOne, RecoversTheFactorUpToPhase) {
  Stream s(2, "extract", 0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd v = random_vector(5, s);
    if (trial % 4 == 0) v(0) = 0.0;
    const Eigen::MatrixXcd q = v * v.adjoint();
    const Eigen::VectorXcd u = extract_rank_one(q);
    EXPECT_LT((u * u.adjoint() - q).norm(), 1e-12 * q.norm());
    int first = 0;
    while (std::abs(u(first)) < 1e-12) ++first;
    EXPECT_NEAR(u(first).imag(), 0.0, 1e-12);
    EXPECT_GT(u(first).real(), 0.0);
  }
  EXPECT_EQ(extract_rank_one(Eigen::MatrixXcd::Zero(2, 2)).norm(), 0.0);
}

// Single-user groups with loose power limits: the minimum-power allocation
// meets every SINR with equality, p = (I - F)^{-1} b with
// F(m, j) = gamma |h_m' u_j|^2 / |h_m' u_m|^2 and b_m = gamma sigma^2 / |h_m' u_m|^2.
TEST(PowerControl, MatchesTheEqualitySolutionForUnicast) {
  NetworkConfig cfg = small_network(3, 2, {1, 1, 1}, 0.0);
  cfg.max_tx_power.setConstant(1e3);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Channel ch = generate_channel(cfg, seed);
    // Matched-filter directions.
    Eigen::MatrixXcd u = ch.h;
    u.colwise().normalize();
    Eigen::MatrixXd gain(3, 3);
    for (int m = 0; m < 3; ++m) {
      for (int j = 0; j < 3; ++j) gain(m, j) = std::norm(ch.h.col(m).dot(u.col(j)));
    }
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(3, 3);
    Eigen::VectorXd b(3);
    for (int m = 0; m < 3; ++m) {
      b(m) = cfg.target_sinr(m) / gain(m, m);
      for (int j = 0; j < 3; ++j) {
        if (j != m) f(m, j) = cfg.target_sinr(m) * gain(m, j) / gain(m, m);
      }
    }
    // Feasible iff the spectral radius of F is below one.
    const double radius = f.eigenvalues().cwiseAbs().maxCoeff();
    const auto p = power_control_lp(u, all_users(cfg), cfg, ch);
    if (radius >= 1.0) {
      EXPECT_FALSE(p.has_value()) << "seed " << seed;
      continue;
    }
    const Eigen::VectorXd expected = (Eigen::MatrixXd::Identity(3, 3) - f).lu().solve(b);
    ASSERT_TRUE(p.has_value()) << "seed " << seed;
    EXPECT_LT((*p - expected).norm(), 1e-6 * expected.norm()) << "seed " << seed;
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST(PowerControl, RespectsPowerLimitsOrGivesUp) {
  NetworkConfig cfg = small_network(2, 2, {1, 1}, 0.0);
  const Channel ch = generate_channel(cfg, 4);
  Eigen::MatrixXcd u = ch.h;
  u.colwise().normalize();
  const auto p = power_control_lp(u, all_users(cfg), cfg, ch);
  ASSERT_TRUE(p.has_value());
  Beamformer v;
  v.v = u * p->cwiseSqrt().asDiagonal();
  EXPECT_TRUE(audit_beamformer(v, all_users(cfg), cfg, ch).ok());

  cfg.max_tx_power.setConstant(1e-4);
  EXPECT_FALSE(power_control_lp(u, all_users(cfg), cfg, ch).has_value());
}

TEST(PowerControl, ZeroDirectionForAServedGroupIsInfeasible) {
  const NetworkConfig cfg = small_network(2, 2, {1, 1}, 0.0);
  const Channel ch = generate_channel(cfg, 5);
  Eigen::MatrixXcd u = ch.h;
  u.colwise().normalize();
  u.col(1).setZero();
  EXPECT_FALSE(power_control_lp(u, all_users(cfg), cfg, ch).has_value());
  // Dropping the user of the zeroed group makes it feasible again.
  const auto p = power_control_lp(u, {0}, cfg, ch);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ((*p)(1), 0.0);
}

TEST(Audit, FlagsQosAndPowerViolations) {
  const NetworkConfig cfg = small_network(1, 1, {1}, 0.0);
  Channel ch;
  ch.h = Eigen::MatrixXcd::Ones(1, 1);
  Beamformer v;
  v.v = Eigen::MatrixXcd::Constant(1, 1, 1.0);  // sinr 1, power 1
  BeamformerAudit a = audit_beamformer(v, {0}, cfg, ch);
  EXPECT_NEAR(a.worst_qos_slack, 0.0, 1e-15);
  EXPECT_NEAR(a.worst_power_ratio, 1.0, 1e-15);
  EXPECT_TRUE(a.ok());
  v.v(0, 0) = 0.99;
  EXPECT_FALSE(audit_beamformer(v, {0}, cfg, ch).ok());
  v.v(0, 0) = 1.01;
  EXPECT_FALSE(audit_beamformer(v, {0}, cfg, ch).ok());
  // Unserved users do not count.
  v.v(0, 0) = 0.5;
  EXPECT_TRUE(audit_beamformer(v, {}, cfg, ch).ok());
}

// Multicast groups make the relaxation loose; randomization must still
// return beamformers that pass the audit.
TEST(Randomization, ProducesAuditedBeamformers) {
  const NetworkConfig cfg = small_network(2, 2, {8}, 2.0);
  int randomized = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Channel ch = generate_channel(cfg, seed);
    const LiftedProblem lp = build_transmit_power_min(all_rrhs(cfg), all_users(cfg), cfg, ch);
    ConicSettings settings;
    settings.tol = 1e-9;
    const ConicSolution sol = solve(lp.problem, settings);
    if (sol.status != SolveStatus::kOptimal) continue;
    const LiftedVars q = extract_lifted(lp, sol, cfg);
    RecoveryOptions options;
    options.seed = seed;
    const auto r = gaussian_randomize(q, all_users(cfg), cfg, ch, options);
    if (!r) continue;
    EXPECT_TRUE(audit_beamformer(r->beamformer, all_users(cfg), cfg, ch).ok()) << "seed " << seed;
    EXPECT_GE(r->report.worst_qos_slack, -1e-6);
    EXPECT_LE(r->report.worst_power_ratio, 1.0 + 1e-8);
    // The relaxation lower-bounds the power of any feasible beamformer.
    EXPECT_GE(r->report.transmit_w, sol.objective * (1 - 1e-6)) << "seed " << seed;
    EXPECT_NEAR(r->report.transmit_w, network_power(r->beamformer, cfg).transmit_w, 1e-9);
    if (r->report.method == RecoveryMethod::kRandomized) {
      ++randomized;
      EXPECT_GT(r->report.candidates_tried, 0);
    }
  }
  EXPECT_GT(randomized, 0);
}

TEST(Randomization, IsDeterministicPerSeed) {
  const NetworkConfig cfg = small_network(3, 2, {3, 3}, 2.0);
  const Channel ch = generate_channel(cfg, 1);
  const LiftedProblem lp = build_transmit_power_min(all_rrhs(cfg), all_users(cfg), cfg, ch);
  const ConicSolution sol = solve(lp.problem);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  const LiftedVars q = extract_lifted(lp, sol, cfg);
  const auto a = gaussian_randomize(q, all_users(cfg), cfg, ch);
  const auto b = gaussian_randomize(q, all_users(cfg), cfg, ch);
  ASSERT_EQ(a.has_value(), b.has_value());
  if (a) {
    EXPECT_EQ(a->beamformer.v, b->beamformer.v);
  }
}

TEST(Randomization, RankOneCovariancesAreUsedDirectly) {
  NetworkConfig cfg = small_network(2, 2, {1}, 4.0);
  cfg.max_tx_power.setConstant(1e3);
  const Channel ch = generate_channel(cfg, 3);
  const LiftedProblem lp = build_transmit_power_min(all_rrhs(cfg), all_users(cfg), cfg, ch);
  ConicSettings settings;
  settings.tol = 1e-10;
  const ConicSolution sol = solve(lp.problem, settings);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  const auto r = gaussian_randomize(extract_lifted(lp, sol, cfg), all_users(cfg), cfg, ch);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->report.method, RecoveryMethod::kRankOneExact);
  EXPECT_LE(r->report.rank_ratio_max, 1e-6);
  EXPECT_NEAR(r->report.transmit_w, sol.objective, 1e-6 * sol.objective);
}

}  // namespace
}  // namespace gcran
