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

// Small networks shared by the unit tests.

#ifndef GCRAN_TESTS_TEST_UTIL_H_
#define GCRAN_TESTS_TEST_UTIL_H_

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "gcran/model.h"

namespace gcran::testing {

// L RRHs with `antennas` each, consecutive groups of the given sizes, unit
// power limits and noise, fronthaul 5.6 + l, eta = 1/4, every user at
// `sinr_db`, and one tier covering every RRH with gain 1.
inline NetworkConfig small_network(int l, int antennas, const std::vector<int>& group_sizes, double sinr_db) {
  NetworkConfig cfg;
  cfg.antennas.assign(l, antennas);
  int next = 0;
  for (int size : group_sizes) {
    std::vector<int> g;
    for (int i = 0; i < size; ++i) g.push_back(next++);
    cfg.groups.push_back(g);
  }
  cfg.max_tx_power = Eigen::VectorXd::Ones(l);
  cfg.fronthaul_power = Eigen::VectorXd::LinSpaced(l, 5.6, 5.6 + l - 1);
  cfg.drain_inefficiency = Eigen::VectorXd::Constant(l, 0.25);
  cfg.noise_sigma = Eigen::VectorXd::Ones(next);
  cfg.target_sinr = Eigen::VectorXd::Constant(next, std::pow(10.0, sinr_db / 10.0));
  cfg.group_weights = Eigen::VectorXd::Ones(l);
  cfg.large_scale = TierModel{{{l, 1.0}}};
  cfg.validate();
  return cfg;
}

}  // namespace gcran::testing

#endif  // GCRAN_TESTS_TEST_UTIL_H_
