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

#include "gcran/select.h"

#include <cmath>

#include <gtest/gtest.h>

#include "gcran/rng.h"
#include "test_util.h"

namespace gcran {
namespace {

using testing::small_network;

int log2_ceil(int n) {
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  return bits;
}

// Monotone oracles with a random threshold; the linear scan is the reference.
TEST(Bisection, MatchesLinearScanWithinTheCallBound) {
  Stream s(21, "bisection", 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int count = static_cast<int>(s.uniform() * 40);
    const int threshold = static_cast<int>(s.uniform() * (count + 1));
    for (SearchMode mode : {SearchMode::kRrh, SearchMode::kUser}) {
      int calls = 0;
      const PrefixOracle oracle = [&](int i) {
        EXPECT_GE(i, 0);
        EXPECT_LE(i, count);
        ++calls;
        return mode == SearchMode::kRrh ? i <= threshold : i >= threshold;
      };
      int scan = 0;
      if (mode == SearchMode::kRrh) {
        while (scan < count && oracle(scan + 1)) ++scan;
      } else {
        scan = count;
        while (scan > 0 && oracle(scan - 1)) --scan;
      }
      calls = 0;
      const BisectionResult r = bisection_cut(count, oracle, mode);
      EXPECT_EQ(r.cut, scan) << "trial " << trial;
      EXPECT_EQ(r.cut, threshold);
      EXPECT_EQ(r.oracle_calls, calls);
      EXPECT_LE(r.oracle_calls, log2_ceil(count + 1)) << "count " << count;
      EXPECT_FALSE(r.non_monotone);
    }
  }
}

TEST(Bisection, EndpointsAreNeverQueried) {
  int calls = 0;
  const BisectionResult rrh = bisection_cut(0, [&](int) { return ++calls, true; }, SearchMode::kRrh);
  EXPECT_EQ(rrh.cut, 0);
  EXPECT_EQ(calls, 0);
  const BisectionResult user = bisection_cut(0, [&](int) { return ++calls, true; }, SearchMode::kUser);
  EXPECT_EQ(user.cut, 0);
  EXPECT_EQ(calls, 0);
  EXPECT_THROW(bisection_cut(-1, [](int) { return true; }, SearchMode::kRrh), std::invalid_argument);
}

TEST(Bisection, VerificationFlagsNonMonotoneOracles) {
  // Feasible at 0 and 2 only: bisection probes 2 first and settles on 2,
  // the scan stops at 0.
  const PrefixOracle oracle = [](int i) { return i == 0 || i == 2; };
  const BisectionResult r = bisection_cut(4, oracle, SearchMode::kRrh, true);
  EXPECT_TRUE(r.non_monotone);
  EXPECT_EQ(r.cut, 2);
  const BisectionResult ok = bisection_cut(4, [](int i) { return i <= 3; }, SearchMode::kRrh, true);
  EXPECT_FALSE(ok.non_monotone);
  EXPECT_EQ(ok.cut, 3);
}

TEST(Ordering, ThetaFollowsTheFormulaAndSortsAscending) {
  NetworkConfig cfg = small_network(3, 1, {1}, 0.0);
  cfg.fronthaul_power << 4.0, 1.0, 0.0;
  Channel ch;
  ch.h.resize(3, 1);
  ch.h << 1.0, 2.0, 1.0;
  LiftedVars q;
  q.q.push_back(Eigen::MatrixXcd::Zero(3, 3));
  q.q[0](0, 0) = 1.0;
  q.q[0](1, 1) = 0.25;
  q.q[0](2, 2) = 1.0;
  const RrhOrdering ord = rrh_ordering(q, cfg, ch);
  EXPECT_NEAR(ord.theta(0), std::sqrt(0.25 * 1.0 / 4.0) * 1.0, 1e-15);
  EXPECT_NEAR(ord.theta(1), std::sqrt(0.25 * 4.0 / 1.0) * 0.5, 1e-15);
  EXPECT_TRUE(std::isinf(ord.theta(2)));
  EXPECT_EQ(ord.order, (std::vector<int>{0, 1, 2}));
}

TEST(Ordering, TiesBreakByIndex) {
  const NetworkConfig cfg = small_network(3, 1, {1}, 0.0);
  Channel ch;
  ch.h = Eigen::MatrixXcd::Ones(3, 1);
  LiftedVars q;
  q.q.push_back(Eigen::MatrixXcd::Zero(3, 3));
  NetworkConfig same = cfg;
  same.fronthaul_power.setConstant(2.0);
  EXPECT_EQ(rrh_ordering(q, same, ch).order, (std::vector<int>{0, 1, 2}));
}

// Four 2-antenna RRHs, two groups of two users.
struct SmallNetwork {
  NetworkConfig cfg;
  explicit SmallNetwork(double db) : cfg(small_network(4, 2, {2, 2}, db)) {}
};

TEST(Pipelines, NetworkPowerOrderingAndAudit) {
  const SmallNetwork net(2.0);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Channel ch = generate_channel(net.cfg, seed);
    const PlanResult ir2a = network_power_min(net.cfg, ch);
    const PlanResult cb = coordinated_beamforming(net.cfg, ch);
    const PlanResult exh = exhaustive_rrh(net.cfg, ch);
    const PlanResult linf = linf_pipeline(net.cfg, ch);
    for (const PlanResult* r : {&ir2a, &cb, &exh, &linf}) {
      ASSERT_EQ(r->status, PlanStatus::kOptimal) << "seed " << seed;
      EXPECT_TRUE(audit_beamformer(r->beamformers, all_users(net.cfg), net.cfg, ch).ok()) << "seed " << seed;
      EXPECT_NEAR(r->power.total_w, network_power(r->beamformers, net.cfg).total_w, 1e-9);
      // Switched-off RRHs carry no power.
      EXPECT_EQ(static_cast<int>(r->active_rrhs.size()) + r->switched_off, net.cfg.num_rrhs());
    }
    EXPECT_EQ(cb.switched_off, 0);
    const double floor = exh.power.total_w * (1 - 1e-6);
    if (exh.recovery.method == RecoveryMethod::kRankOneExact) {
      EXPECT_GE(ir2a.power.total_w, floor) << "seed " << seed;
      EXPECT_GE(linf.power.total_w, floor) << "seed " << seed;
      EXPECT_GE(cb.power.total_w, floor) << "seed " << seed;
    }
    EXPECT_LE(ir2a.power.total_w, cb.power.total_w * (1 + 1e-6)) << "seed " << seed;
    EXPECT_EQ(ir2a.trace.status, TraceStatus::kConverged);
    EXPECT_LE(ir2a.trace.max_increase(), 1e-6 * std::max(1.0, ir2a.trace.records.front().objective));
    EXPECT_LE(ir2a.oracle_calls, log2_ceil(net.cfg.num_rrhs() + 1));
  }
}

TEST(Pipelines, InfeasibleNetworkIsReported) {
  SmallNetwork net(20.0);
  const Channel ch = generate_channel(net.cfg, 0);
  EXPECT_EQ(check_feasible(all_rrhs(net.cfg), all_users(net.cfg), net.cfg, ch, {}), Feasibility::kInfeasible);
  EXPECT_EQ(network_power_min(net.cfg, ch).status, PlanStatus::kInfeasible);
  EXPECT_EQ(coordinated_beamforming(net.cfg, ch).status, PlanStatus::kInfeasible);
}

TEST(Pipelines, AdmissionNeverBeatsExhaustiveAndPassesAudit) {
  const SmallNetwork net(10.0);
  int infeasible = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Channel ch = generate_channel(net.cfg, seed);
    if (check_feasible(all_rrhs(net.cfg), all_users(net.cfg), net.cfg, ch, {}) != Feasibility::kInfeasible) continue;
    ++infeasible;
    const AdmissionResult exh = exhaustive_users(net.cfg, ch);
    ASSERT_EQ(exh.status, PlanStatus::kOptimal);
    for (const AdmissionResult& r : {user_admission(net.cfg, ch), mdr_admission(net.cfg, ch), exh}) {
      ASSERT_EQ(r.status, PlanStatus::kOptimal) << "seed " << seed;
      EXPECT_LE(r.admitted.size(), exh.admitted.size());
      EXPECT_EQ(static_cast<int>(r.admitted.size()) + r.removed, net.cfg.num_users());
      EXPECT_TRUE(audit_beamformer(r.beamformers, r.admitted, net.cfg, ch).ok()) << "seed " << seed;
      EXPECT_TRUE(std::is_sorted(r.admitted.begin(), r.admitted.end()));
    }
  }
  EXPECT_GT(infeasible, 0);
}

TEST(Pipelines, ExhaustiveGuardsTheSize) {
  const NetworkConfig cfg = small_network(kMaxExhaustive + 1, 1, {1}, 0.0);
  const Channel ch = generate_channel(cfg, 0);
  EXPECT_THROW(exhaustive_rrh(cfg, ch), std::invalid_argument);
  const NetworkConfig users = small_network(2, 1, {kMaxExhaustive + 1}, 0.0);
  EXPECT_THROW(exhaustive_users(users, generate_channel(users, 0)), std::invalid_argument);
}

TEST(Status, Names) {
  EXPECT_STREQ(to_string(PlanStatus::kOptimal), "Optimal");
  EXPECT_STREQ(to_string(PlanStatus::kInfeasible), "Infeasible");
  EXPECT_STREQ(to_string(TraceStatus::kConverged), "Converged");
}

}  // namespace
}  // namespace gcran
