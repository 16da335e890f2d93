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

#include "gcran/model.h"

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "gcran/rng.h"
#include "gcran/scenario.h"
#include "test_util.h"

namespace gcran {
namespace {

using testing::small_network;

TEST(NetworkConfig, AcceptsSmallNetwork) {
  const NetworkConfig cfg = small_network(3, 2, {2, 1}, 0.0);
  EXPECT_EQ(cfg.num_rrhs(), 3);
  EXPECT_EQ(cfg.num_users(), 3);
  EXPECT_EQ(cfg.total_antennas(), 6);
  EXPECT_EQ(cfg.antenna_offset(2), 4);
  EXPECT_EQ(cfg.user_groups(), (std::vector<int>{0, 0, 1}));
}

TEST(NetworkConfig, RejectsInvalidFields) {
  const NetworkConfig base = small_network(3, 2, {2, 1}, 0.0);
  auto expect_bad = [](NetworkConfig cfg) { EXPECT_THROW(cfg.validate(), ConfigError); };

  NetworkConfig cfg = base;
  cfg.antennas[1] = 0;
  expect_bad(cfg);

  cfg = base;
  cfg.groups[1] = {1};  // user 1 twice
  expect_bad(cfg);

  cfg = base;
  cfg.groups.push_back({});
  expect_bad(cfg);

  cfg = base;
  cfg.max_tx_power(0) = 0.0;
  expect_bad(cfg);

  cfg = base;
  cfg.fronthaul_power(0) = -1.0;
  expect_bad(cfg);

  cfg = base;
  cfg.drain_inefficiency(2) = 1.5;
  expect_bad(cfg);

  cfg = base;
  cfg.group_weights(1) = 0.0;
  expect_bad(cfg);

  cfg = base;
  cfg.noise_sigma = Eigen::VectorXd::Ones(2);
  expect_bad(cfg);

  cfg = base;
  cfg.target_sinr(0) = std::nan("");
  expect_bad(cfg);

  cfg = base;
  cfg.large_scale = TierModel{{{2, 1.0}}};  // covers 2 of 3 RRHs
  expect_bad(cfg);

  cfg = base;
  cfg.large_scale = GainMap{Eigen::MatrixXd::Ones(2, 3)};
  expect_bad(cfg);
}

TEST(NetworkConfig, ZeroFronthaulIsAllowed) {
  NetworkConfig cfg = small_network(2, 1, {1}, 0.0);
  cfg.fronthaul_power.setZero();
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Channel, IsDeterministicPerSeed) {
  const NetworkConfig cfg = small_network(4, 2, {2, 2}, 0.0);
  const Channel a = generate_channel(cfg, 7);
  const Channel b = generate_channel(cfg, 7);
  const Channel c = generate_channel(cfg, 8);
  EXPECT_EQ(a.h, b.h);
  EXPECT_NE(a.h, c.h);
  EXPECT_EQ(a.h.rows(), 8);
  EXPECT_EQ(a.h.cols(), 4);
}

TEST(Channel, TiersAssignEachGainToTheStatedNumberOfRrhs) {
  NetworkConfig cfg = small_network(6, 1, {3}, 0.0);
  cfg.large_scale = TierModel{{{2, 1.0}, {3, 0.7}, {1, 0.5}}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd d = large_scale_gains(cfg, seed);
    for (int u = 0; u < cfg.num_users(); ++u) {
      EXPECT_EQ((d.row(u).array() == 1.0).count(), 2);
      EXPECT_EQ((d.row(u).array() == 0.7).count(), 3);
      EXPECT_EQ((d.row(u).array() == 0.5).count(), 1);
    }
  }
}

TEST(Channel, GainMapScalesSmallScaleFading) {
  NetworkConfig cfg = small_network(2, 3, {1, 1}, 0.0);
  Eigen::MatrixXd g(2, 2);
  g << 1.0, 0.0, 0.0, 0.5;
  cfg.large_scale = GainMap{g};
  const Channel ch = generate_channel(cfg, 3);
  EXPECT_EQ(ch.h.block(3, 0, 3, 1).norm(), 0.0);
  EXPECT_EQ(ch.h.block(0, 1, 3, 1).norm(), 0.0);
  EXPECT_GT(ch.h.block(3, 1, 3, 1).norm(), 0.0);
}

TEST(Stream, ComplexNormalHasUnitVariance) {
  Stream s(1, "test", 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += std::norm(s.complex_normal());
  EXPECT_NEAR(sum / n, 1.0, 0.02);
}

TEST(Stream, DependsOnEveryKeyPart) {
  const double base = Stream(1, "a", 0).uniform();
  EXPECT_EQ(base, Stream(1, "a", 0).uniform());
  EXPECT_NE(base, Stream(2, "a", 0).uniform());
  EXPECT_NE(base, Stream(1, "b", 0).uniform());
  EXPECT_NE(base, Stream(1, "a", 1).uniform());
}

// Two single-antenna RRHs, two single-user groups with hand-written channels.
struct TwoUserFixture {
  NetworkConfig cfg = small_network(2, 1, {1, 1}, 0.0);
  Channel ch;
  Beamformer v;
  TwoUserFixture() {
    cfg.noise_sigma << 1.0, 2.0;
    cfg.target_sinr << 2.0, 0.5;
    ch.h.resize(2, 2);
    ch.h << std::complex<double>(1, 0), std::complex<double>(0, 1), std::complex<double>(0, 2),
        std::complex<double>(1, 0);
    v.v.resize(2, 2);
    v.v << std::complex<double>(1, 0), std::complex<double>(0, 0), std::complex<double>(0, 0),
        std::complex<double>(0, 1);
  }
};

TEST(Sinr, MatchesHandComputation) {
  TwoUserFixture f;
  // User 0: h0^H v0 = 1, h0^H v1 = conj(2i) * i = 2; sinr = 1 / (4 + 1).
  EXPECT_NEAR(sinr(f.ch, f.v, 0, f.cfg), 0.2, 1e-15);
  EXPECT_NEAR(qos_margin(f.ch, f.v, 0, f.cfg), 2.0 * 5.0 - 1.0, 1e-15);
  // User 1: h1^H v0 = conj(i) = -i, h1^H v1 = i; sinr = 1 / (1 + 4).
  EXPECT_NEAR(sinr(f.ch, f.v, 1, f.cfg), 0.2, 1e-15);
  EXPECT_NEAR(qos_margin(f.ch, f.v, 1, f.cfg), 0.5 * 5.0 - 1.0, 1e-15);
}

TEST(Sinr, RejectsBadIndices) {
  TwoUserFixture f;
  EXPECT_THROW(sinr(f.ch, f.v, 2, f.cfg), std::invalid_argument);
  Beamformer wrong;
  wrong.v = Eigen::MatrixXcd::Zero(3, 2);
  EXPECT_THROW(qos_margin(f.ch, wrong, 0, f.cfg), std::invalid_argument);
}

TEST(Power, PerRrhAndNetworkTotals) {
  const NetworkConfig cfg = small_network(3, 2, {1, 1}, 0.0);
  Beamformer v;
  v.v = Eigen::MatrixXcd::Zero(6, 2);
  v.v(0, 0) = {0.3, 0.4};  // RRH 0: 0.25
  v.v(1, 1) = 0.5;         // RRH 0: +0.25
  v.v(4, 0) = {0.0, 0.1};  // RRH 2: 0.01
  const Eigen::VectorXd p = rrh_power(v, cfg);
  EXPECT_NEAR(p(0), 0.5, 1e-15);
  EXPECT_EQ(p(1), 0.0);
  EXPECT_NEAR(p(2), 0.01, 1e-15);

  const PowerBreakdown b = network_power(v, cfg);
  EXPECT_NEAR(b.transmit_w, (0.5 + 0.01) / 0.25, 1e-12);
  EXPECT_NEAR(b.fronthaul_w, 5.6 + 7.6, 1e-12);
  EXPECT_NEAR(b.total_w, b.transmit_w + b.fronthaul_w, 1e-12);
  EXPECT_EQ(b.active_rrhs, (std::vector<int>{0, 2}));

  // A larger zero tolerance switches RRH 2 off.
  EXPECT_EQ(network_power(v, cfg, 0.2).active_rrhs, (std::vector<int>{0}));
}

TEST(MixedNorm, SingleBlockAndWeights) {
  const NetworkConfig cfg = small_network(2, 2, {1}, 0.0);
  Beamformer v;
  v.v = Eigen::MatrixXcd::Zero(4, 1);
  v.v(0, 0) = std::sqrt(2.0);
  v.v(1, 0) = std::complex<double>(0.0, std::sqrt(2.0));
  Eigen::VectorXd rho(2);
  rho << 1.0, 1.0;
  EXPECT_NEAR(mixed_l12_norm(v, cfg, rho), 2.0, 1e-14);
  rho << 3.0, 1.0;
  EXPECT_NEAR(mixed_l12_norm(v, cfg, rho), 6.0, 1e-14);
}

TEST(MixedNorm, BoundedByRootLTimesFrobenius) {
  const NetworkConfig cfg = small_network(5, 3, {2, 2}, 0.0);
  Stream s(4, "mixed-norm", 0);
  const Eigen::VectorXd rho = Eigen::VectorXd::Ones(5);
  for (int trial = 0; trial < 50; ++trial) {
    Beamformer v;
    v.v.resize(15, 2);
    for (int i = 0; i < 15; ++i) {
      for (int j = 0; j < 2; ++j) v.v(i, j) = s.complex_normal();
    }
    const double n = mixed_l12_norm(v, cfg, rho);
    const double f = v.v.norm();
    EXPECT_LE(n, std::sqrt(5.0) * f * (1 + 1e-12));
    EXPECT_GE(n, f * (1 - 1e-12));
  }
}

TEST(Units, DbConversion) {
  EXPECT_NEAR(db_to_linear(0.0), 1.0, 1e-15);
  EXPECT_NEAR(db_to_linear(10.0), 10.0, 1e-12);
  EXPECT_NEAR(db_to_linear(3.0), 1.9952623149688795, 1e-12);
}

}  // namespace
}  // namespace gcran
